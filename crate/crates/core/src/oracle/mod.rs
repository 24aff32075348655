//! Independent checks: double-precision shooting and Bessel zeros.
//!
//! At E = 0 the radial solution regular at the origin is
//! `u = √r · J_{2l+1}(2√(A r))` up to normalisation, so the box radii at
//! which a state reaches zero energy are `j²_{2l+1,n} / (4A)`.

mod bessel;
mod shooting;

pub use bessel::{bessel_j, bessel_j_zero};
pub use shooting::{
    integrate_radial, oracle_critical_radii, oracle_critical_radii_within, oracle_energy,
    IntegrationConfig, Method, OracleResult, Trajectory,
};

use crate::error::Result;
use crate::numerics::{Float, PrecisionContext};

/// `j²_{2l+1,n} / (4A)`.
pub fn bessel_critical_radius(l: u32, n: u32, coulomb: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let zero = bessel_j_zero(2 * l + 1, n, ctx)?;
    let square = Float::with_val(ctx.bits(), zero.square_ref());
    Ok(square / Float::with_val(ctx.bits(), coulomb * 4u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_critical_radii() {
        let ctx = PrecisionContext::new(30).unwrap();
        for (l, n, expected) in [
            (0, 1, "1.8352463302654866572"),
            (0, 6, "48.097738137838669821"),
            (1, 1, "5.0883082272750399678"),
            (1, 6, "63.747459484409389725"),
        ] {
            let r = bessel_critical_radius(l, n, &ctx.float(2), &ctx).unwrap();
            let diff = Float::with_val(ctx.bits(), &r - ctx.parse(expected).unwrap()).abs();
            assert!(diff < 1e-18, "l={l} n={n}: {r}");
        }
    }
}
