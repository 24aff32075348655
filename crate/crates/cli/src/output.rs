use crate::{Failure, Format};
use anyhow::Context;
use confined_aim::numerics::{to_decimal_string, Float};
use serde::Serialize;
use std::io::Write;

/// Full-precision decimal string.
pub fn decimal(value: &Float, digits: u32) -> String {
    to_decimal_string(value, digits as usize)
}

/// Scientific notation with a few digits, for residuals and drifts.
pub fn scientific(value: &Float) -> String {
    if value.is_zero() {
        return "0".into();
    }
    let (negative, digits, exponent) = value.to_sign_string_exp(10, Some(6));
    let exponent = exponent.unwrap_or(0) - 1;
    let sign = if negative { "-" } else { "" };
    let mantissa = digits.trim_end_matches('0');
    let (head, tail) = mantissa.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{exponent}")
    } else {
        format!("{sign}{head}.{tail}e{exponent}")
    }
}

/// One JSON object (`single`) or an array, or CSV with a header row.
pub fn emit<T: Serialize>(records: &[T], single: bool, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let written: anyhow::Result<()> = (|| {
        match format {
            Format::Json => {
                if single && records.len() == 1 {
                    serde_json::to_writer_pretty(&mut *out, &records[0])?;
                } else {
                    serde_json::to_writer_pretty(&mut *out, records)?;
                }
                writeln!(out)?;
            }
            Format::Csv => {
                let mut writer = csv::Writer::from_writer(&mut *out);
                for record in records {
                    writer.serialize(record)?;
                }
                writer.flush()?;
            }
        }
        Ok(())
    })();
    written.context("writing output").map_err(Failure::Io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use confined_aim::numerics::PrecisionContext;

    #[test]
    fn scientific_strings() {
        let ctx = PrecisionContext::default();
        assert_eq!(scientific(&ctx.parse("3.5e-56").unwrap()), "3.5e-56");
        assert_eq!(scientific(&ctx.parse("-1e3").unwrap()), "-1e3");
        assert_eq!(scientific(&ctx.zero()), "0");
    }
}
