use crate::error::Result;
use crate::matcore::{check_order, schatten_from_values, DensityMatrix, HermitianOperator};
use crate::scalar::Real;

fn difference<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<HermitianOperator<T>> {
    rho.matrix().ensure_same_dim(sigma.matrix())?;
    Ok(rho.hermitian().sub(sigma.hermitian()))
}

/// `ℱ = Tr√(√ρ σ √ρ)`, clipped to `[0, 1]`.
pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    rho.matrix().ensure_same_dim(sigma.matrix())?;
    let e = rho.eig();
    let cut = e.max_abs_value() * T::from_usize_lossy(rho.dim()) * T::epsilon();
    let sqrt_rho = e.reconstruct_with(|l| if l > cut { l.sqrt() } else { T::zero() });
    let inner = HermitianOperator::from_hermitian_part(&(&(&sqrt_rho * sigma.matrix()) * &sqrt_rho));
    let ei = inner.eig();
    let cut = ei.max_abs_value() * T::from_usize_lossy(rho.dim()) * T::epsilon();
    let f: T = ei.values.iter().map(|&l| if l > cut { l.sqrt() } else { T::zero() }).sum();
    Ok(f.min(T::one()).max(T::zero()))
}

/// `√(1 − ℱ)`
pub fn bures_distance<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    Ok((T::one() - fidelity(rho, sigma)?).max(T::zero()).sqrt())
}

/// `½ Tr|ρ − σ|`
pub fn trace_distance<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    let d = difference(rho, sigma)?;
    let s: T = d.eig().values.iter().map(|l| l.abs()).sum();
    Ok((T::lit(0.5) * s).min(T::one()))
}

/// `𝖣_α = (½ Tr|ρ − σ|^α)^{1/α}`; `α = ∞` gives the largest `|λ(ρ − σ)|`.
pub fn schatten_distance<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>, alpha: T) -> Result<T> {
    check_order(alpha)?;
    let d = difference(rho, sigma)?;
    let norm = schatten_from_values(&d.eig().values, alpha)?;
    Ok((crate::classical::schatten_prefactor(alpha) * norm).min(T::one()))
}
