use super::TerminationReport;
use crate::error::{Error, Result};
use crate::numerics::{Complex, FieldScalar, Float};

/// `f(r) ∝ exp(−∫ α dr)` on `grid` by the trapezoid rule over the converged
/// α values, scaled so that `f(grid[0]) = reference`.
pub fn reconstruct_factor<T: FieldScalar>(
    reports: &[TerminationReport<T>],
    grid: &[Float],
    reference: &Complex,
) -> Result<Vec<Complex>> {
    if reports.len() != grid.len() || grid.is_empty() {
        return Err(Error::IndexOutOfRange {
            index: reports.len(),
            count: grid.len(),
        });
    }
    if let Some(index) = reports.iter().position(|r| !r.converged) {
        return Err(Error::NotConverged(index));
    }
    let prec = reference.prec();
    let alphas: Vec<Complex> = reports.iter().map(|r| r.alpha.to_complex()).collect();
    let mut integral = Complex::zero(prec);
    let mut out = Vec::with_capacity(grid.len());
    out.push(reference.clone());
    for k in 1..grid.len() {
        let width = Float::with_val(prec, &grid[k] - &grid[k - 1]) / 2u32;
        integral = &integral + &(&alphas[k - 1] + &alphas[k]).scale(&width);
        out.push(reference * &(-&integral).exp());
    }
    Ok(out)
}
