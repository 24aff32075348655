use crate::output::{decimal, emit, scientific};
use crate::{CriticalArgs, ExactArgs, Failure, RunConfig, SolveArgs, TableArgs};
use confined_aim::golden::{
    deviation_in_last_place, EnergyRow, CRITICAL_RADII, EXACT, GROUND_STATE, TWO_P,
};
use confined_aim::hydrogen::{
    closed_form_radius, critical_radius, solve_energy, CriticalOptions, EnergyOptions,
    EnergyResult, ExactSolution, HydrogenModel, StateLabel,
};
use confined_aim::numerics::{Float, PrecisionContext};
use confined_aim::oracle::{bessel_critical_radius, oracle_critical_radii, IntegrationConfig};
use confined_aim::Error;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

/// Keys shared by every energy result.
#[derive(Serialize, Debug, Default)]
struct EnergyRecord {
    #[serde(rename = "A")]
    coulomb: String,
    #[serde(rename = "R")]
    radius: String,
    l: String,
    n: String,
    #[serde(rename = "E")]
    energy: String,
    a_re: String,
    a_im: String,
    axis: String,
    iterations: String,
    residual: String,
    digits: String,
    #[serde(rename = "oracle_E", skip_serializing_if = "Option::is_none")]
    oracle_energy: Option<String>,
    #[serde(rename = "golden_E", skip_serializing_if = "Option::is_none")]
    golden_energy: Option<String>,
    /// Deviation from the published value in units of its last digit.
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize, Debug, Default)]
struct CriticalRecord {
    #[serde(rename = "A")]
    coulomb: String,
    l: String,
    n: String,
    r_c: String,
    iterations: String,
    stability: String,
    digits: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    bessel_r_c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_r_c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    golden_r_c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize, Debug, Default)]
struct ExactRecord {
    #[serde(rename = "A")]
    coulomb: String,
    n: String,
    l: String,
    m: String,
    #[serde(rename = "R")]
    radius: String,
    #[serde(rename = "E")]
    energy: String,
    #[serde(rename = "closed_R")]
    closed_radius: String,
    #[serde(rename = "closed_E")]
    closed_energy: String,
    /// Ascending coefficients of the polynomial factor in r.
    factor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(rename = "golden_AR")]
    golden_product: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<String>,
}

fn context(run: &RunConfig) -> Result<PrecisionContext, Failure> {
    Ok(PrecisionContext::new(run.digits)?)
}

/// Inputs are read at a precision far above any working precision.
fn parse_input(text: &str) -> Result<Float, Failure> {
    Ok(PrecisionContext::new(HydrogenModel::INPUT_DIGITS)?.parse(text)?)
}

fn energy_record(model: &HydrogenModel, result: &EnergyResult, digits: u32) -> EnergyRecord {
    EnergyRecord {
        coulomb: decimal(model.coulomb(), digits),
        radius: decimal(model.radius(), digits),
        l: result.state.l.to_string(),
        n: result.state.n.to_string(),
        energy: decimal(&result.energy, digits),
        a_re: decimal(&result.parameter.re, digits),
        a_im: decimal(&result.parameter.im, digits),
        axis: result.axis.as_str().to_string(),
        iterations: result.n_used.to_string(),
        residual: scientific(&result.relative_residual),
        digits: digits.to_string(),
        oracle_energy: result.oracle_energy.map(|e| format!("{e:.12e}")),
        ..EnergyRecord::default()
    }
}

fn warn_unstabilized(result: &EnergyResult) {
    if !result.stabilized {
        eprintln!(
            "warning: {} did not stabilize to the requested digits (best relative change {:e})",
            result.state,
            result.stability.to_f64()
        );
    }
}

pub fn solve(args: &SolveArgs, out: &mut dyn Write) -> Result<(), Failure> {
    context(&args.run)?;
    let state: StateLabel = args.state.parse()?;
    let model = HydrogenModel::new(parse_input(&args.coulomb)?, state.l, parse_input(&args.radius)?)?;
    let opts = EnergyOptions {
        digits: args.run.digits,
        n_max: args.run.n_max,
        verify_with_oracle: args.oracle,
        ..EnergyOptions::default()
    };
    let result = solve_energy(&model, state, &opts)?;
    warn_unstabilized(&result);
    emit(&[energy_record(&model, &result, args.run.digits)], true, args.run.format, out)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::Io(e.into()))
}

pub fn table(args: &TableArgs, out: &mut dyn Write) -> Result<(), Failure> {
    context(&args.run)?;
    match args.id {
        1 => table_exact(args, out),
        2 => table_energies(args, &GROUND_STATE, 0, out),
        3 => table_energies(args, &TWO_P, 1, out),
        4 => table_critical(args, out),
        id => Err(Failure::InvalidInput(format!("no table {id}; choose 1, 2, 3 or 4"))),
    }
}

fn table_energies(args: &TableArgs, rows: &[EnergyRow], l: u32, out: &mut dyn Write) -> Result<(), Failure> {
    let digits = args.run.digits;
    let opts = EnergyOptions {
        digits,
        n_max: args.run.n_max,
        ..EnergyOptions::default()
    };
    let state = StateLabel { n: 1, l };
    let records: Vec<(EnergyRecord, bool)> = pool(args.jobs)?.install(|| {
        rows.par_iter()
            .map(|row| {
                let model = HydrogenModel::parse("2", l, row.radius).expect("reference rows are valid");
                let note = Some(if row.exact { "exact" } else { "" }.to_string());
                match solve_energy(&model, state, &opts) {
                    Ok(result) => {
                        let deviation = deviation_in_last_place(&result.energy, row.energy)
                            .map(|d| format!("{:.3}", d.to_f64()))
                            .unwrap_or_default();
                        let record = EnergyRecord {
                            golden_energy: Some(row.energy.to_string()),
                            deviation: Some(deviation),
                            note,
                            error: Some(String::new()),
                            ..energy_record(&model, &result, digits)
                        };
                        (record, true)
                    }
                    Err(e) => {
                        let record = EnergyRecord {
                            coulomb: "2".into(),
                            radius: row.radius.to_string(),
                            l: l.to_string(),
                            n: "1".into(),
                            digits: digits.to_string(),
                            golden_energy: Some(row.energy.to_string()),
                            deviation: Some(String::new()),
                            note,
                            error: Some(e.to_string()),
                            ..EnergyRecord::default()
                        };
                        (record, false)
                    }
                }
            })
            .collect()
    });
    finish_table(records, args, out)
}

fn finish_table<T: Serialize>(records: Vec<(T, bool)>, args: &TableArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let failed = records.iter().filter(|(_, ok)| !ok).count();
    let records: Vec<T> = records.into_iter().map(|(r, _)| r).collect();
    emit(&records, false, args.run.format, out)?;
    if failed > 0 {
        return Err(Failure::NotConverged(format!("{failed} row(s) failed")));
    }
    Ok(())
}

fn critical_options(run: &RunConfig) -> CriticalOptions {
    CriticalOptions {
        digits: run.digits,
        n_max: run.n_max,
        ..CriticalOptions::default()
    }
}

fn table_critical(args: &TableArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let digits = args.run.digits;
    let opts = critical_options(&args.run);
    let coulomb = Float::with_val(64, 2);
    let records: Vec<(CriticalRecord, bool)> = pool(args.jobs)?.install(|| {
        CRITICAL_RADII
            .par_iter()
            .map(|row| {
                let base = CriticalRecord {
                    coulomb: "2".into(),
                    l: row.l.to_string(),
                    n: row.n.to_string(),
                    digits: digits.to_string(),
                    golden_r_c: Some(row.radius.to_string()),
                    ..CriticalRecord::default()
                };
                match critical_radius(row.l, row.n, &coulomb, &opts) {
                    Ok(root) => {
                        let deviation = deviation_in_last_place(&root.value, row.radius)
                            .map(|d| format!("{:.3}", d.to_f64()))
                            .unwrap_or_default();
                        let record = CriticalRecord {
                            r_c: decimal(&root.value, digits),
                            iterations: root.n_used.to_string(),
                            stability: scientific(&root.stability),
                            deviation: Some(deviation),
                            error: Some(String::new()),
                            ..base
                        };
                        (record, true)
                    }
                    Err(e) => (
                        CriticalRecord {
                            deviation: Some(String::new()),
                            error: Some(e.to_string()),
                            ..base
                        },
                        false,
                    ),
                }
            })
            .collect()
    });
    finish_table(records, args, out)
}

fn table_exact(args: &TableArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let ctx = context(&args.run)?;
    let coulomb = ctx.float(2);
    let mut records = Vec::new();
    for row in EXACT {
        let solution = ExactSolution::new(row.n, row.l, row.m, &coulomb, &ctx)?;
        let ar = Float::with_val(ctx.bits(), solution.radius() * &coulomb);
        let (golden, deviation) = match (row.closed, row.printed) {
            (Some(closed), _) => {
                let diff = Float::with_val(ctx.bits(), &ar - &closed.value(&ctx)).abs();
                (closed.to_string().replace("/A", ""), scientific(&diff))
            }
            (None, Some(printed)) => {
                let d = deviation_in_last_place(&ar, printed)?;
                (printed.to_string(), format!("{:.3}", d.to_f64()))
            }
            (None, None) => (String::new(), String::new()),
        };
        records.push(ExactRecord {
            golden_product: Some(golden),
            deviation: Some(deviation),
            ..exact_record(&solution, args.run.digits)
        });
    }
    emit(&records, false, args.run.format, out)
}

fn exact_record(solution: &ExactSolution, digits: u32) -> ExactRecord {
    let principal = solution.n + solution.l + 1;
    ExactRecord {
        coulomb: decimal(&solution.coulomb, digits),
        n: solution.n.to_string(),
        l: solution.l.to_string(),
        m: solution.m.to_string(),
        radius: decimal(solution.radius(), digits),
        energy: decimal(&solution.energy, digits),
        closed_radius: closed_form_radius(solution.n, solution.l, solution.m)
            .map(|c| c.to_string())
            .unwrap_or_default(),
        closed_energy: format!("-A^2/{}", 4 * principal * principal),
        factor: solution
            .factor
            .coefficients()
            .iter()
            .map(|c| decimal(c, digits))
            .collect::<Vec<_>>()
            .join(" "),
        ..ExactRecord::default()
    }
}

pub fn exact(args: &ExactArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let ctx = context(&args.run)?;
    if args.n == 0 {
        return Err(Failure::InvalidInput("n must be at least 1".into()));
    }
    let coulomb = parse_input(&args.coulomb)?;
    if !(coulomb > 0) {
        return Err(Error::InvalidModel("A must be positive".into()).into());
    }
    let records = (0..args.n)
        .map(|m| ExactSolution::new(args.n, args.l, m, &coulomb, &ctx).map(|s| exact_record(&s, args.run.digits)))
        .collect::<Result<Vec<_>, _>>()?;
    emit(&records, false, args.run.format, out)
}

pub fn critical(args: &CriticalArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let ctx = context(&args.run)?;
    if args.n == 0 {
        return Err(Failure::InvalidInput("n must be at least 1".into()));
    }
    let coulomb = parse_input(&args.coulomb)?;
    let digits = args.run.digits;
    let root = critical_radius(args.l, args.n, &coulomb, &critical_options(&args.run))?;
    let mut record = CriticalRecord {
        coulomb: decimal(&coulomb, digits),
        l: args.l.to_string(),
        n: args.n.to_string(),
        r_c: decimal(&root.value, digits),
        iterations: root.n_used.to_string(),
        stability: scientific(&root.stability),
        digits: digits.to_string(),
        ..CriticalRecord::default()
    };
    if args.oracle {
        let bessel = bessel_critical_radius(args.l, args.n, &coulomb, &ctx)?;
        let cfg = IntegrationConfig {
            steps: 200_000,
            ..IntegrationConfig::default()
        };
        let shooting = oracle_critical_radii(args.l, args.n as usize, coulomb.to_f64(), &cfg)?[args.n as usize - 1];
        record.bessel_r_c = Some(decimal(&bessel, digits));
        record.oracle_r_c = Some(format!("{shooting:.12e}"));
        let aim = root.value.to_f64();
        let mismatch = |other: f64| (aim - other).abs() > 1e-8 * aim.abs();
        if mismatch(bessel.to_f64()) || mismatch(shooting) {
            emit(&[record], true, args.run.format, out)?;
            return Err(Error::OracleMismatch {
                aim: aim.to_string(),
                oracle: format!("Bessel {}, shooting {shooting}", bessel.to_f64()),
            }
            .into());
        }
    }
    emit(&[record], true, args.run.format, out)
}
