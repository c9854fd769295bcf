use crate::error::{Error, Result};
use crate::matcore::{
    expm, unitary_propagator, unvectorize, vectorize, ComplexMatrix, DensityMatrix, HermitianOperator,
    PureState, Superoperator,
};
use crate::scalar::{ci, Real};

/// How `ρ(θ)` is generated.
#[derive(Clone, Debug)]
pub enum FamilyKind<T: Real> {
    /// `ρ(θ) = e^{−iHθ} ρ₀ e^{iHθ}`
    Unitary {
        hamiltonian: HermitianOperator<T>,
        state: DensityMatrix<T>,
    },
    /// `ρ(θ) = e^{−iH_eff θ} ρ₀ e^{iH_eff† θ}` with `H_eff = H − iΓ`, not renormalised.
    NonHermitian {
        h: HermitianOperator<T>,
        gamma: HermitianOperator<T>,
        state: DensityMatrix<T>,
    },
    /// `vec ρ(θ) = e^{ℒθ} vec ρ₀`
    Lindblad {
        generator: Superoperator<T>,
        state: DensityMatrix<T>,
    },
    /// Gibbs states `e^{−βH}/Z` parametrised by `β`.
    Thermal { hamiltonian: HermitianOperator<T> },
    /// States on a uniform grid; derivatives by finite differences.
    Table { points: Vec<(T, HermitianOperator<T>)> },
}

/// Differentiable curve `θ ↦ ρ(θ)`.
#[derive(Clone, Debug)]
pub struct ParametricFamily<T: Real> {
    kind: FamilyKind<T>,
}

/// State and derivative at one parameter value.
#[derive(Clone, Debug)]
pub struct FamilyPoint<T: Real> {
    pub state: HermitianOperator<T>,
    pub derivative: HermitianOperator<T>,
}

fn check_dims<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

impl<T: Real> ParametricFamily<T> {
    pub fn unitary(hamiltonian: HermitianOperator<T>, state: DensityMatrix<T>) -> Result<Self> {
        check_dims(hamiltonian.matrix(), state.matrix())?;
        Ok(Self {
            kind: FamilyKind::Unitary { hamiltonian, state },
        })
    }

    pub fn pure_unitary(psi: &PureState<T>, hamiltonian: HermitianOperator<T>) -> Result<Self> {
        Self::unitary(hamiltonian, psi.density())
    }

    pub fn non_hermitian(
        h: HermitianOperator<T>,
        gamma: HermitianOperator<T>,
        state: DensityMatrix<T>,
    ) -> Result<Self> {
        check_dims(h.matrix(), gamma.matrix())?;
        check_dims(h.matrix(), state.matrix())?;
        Ok(Self {
            kind: FamilyKind::NonHermitian { h, gamma, state },
        })
    }

    /// The generator must preserve Hermiticity and trace.
    pub fn lindblad(generator: Superoperator<T>, state: DensityMatrix<T>) -> Result<Self> {
        if generator.dim() != state.dim() {
            return Err(Error::DimensionMismatch {
                expected: generator.dim(),
                found: state.dim(),
            });
        }
        let h = generator.hermiticity_preservation_deviation();
        if !(h <= T::herm_tol()) {
            return Err(Error::InvalidInput(format!(
                "generator does not preserve Hermiticity (deviation {h:e})"
            )));
        }
        let t = generator.trace_deviation();
        if !(t <= T::herm_tol()) {
            return Err(Error::InvalidInput(format!(
                "generator does not preserve the trace (deviation {t:e})"
            )));
        }
        Ok(Self {
            kind: FamilyKind::Lindblad { generator, state },
        })
    }

    pub fn thermal(hamiltonian: HermitianOperator<T>) -> Self {
        Self {
            kind: FamilyKind::Thermal { hamiltonian },
        }
    }

    /// Tabulated states on a strictly increasing, uniformly spaced grid (at least 2 points).
    pub fn table(mut points: Vec<(T, HermitianOperator<T>)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput("table family needs at least 2 points".into()));
        }
        points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        let dim = points[0].1.dim();
        if let Some(p) = points.iter().find(|p| p.1.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.1.dim(),
            });
        }
        if points.iter().any(|p| !p.0.is_finite()) {
            return Err(Error::InvalidInput("table angles must be finite".into()));
        }
        let h = points[1].0 - points[0].0;
        if !(h > T::zero()) {
            return Err(Error::InvalidInput("table angles must be distinct".into()));
        }
        for w in points.windows(2) {
            let step = w[1].0 - w[0].0;
            if (step - h).abs() > T::lit(1e-6) * h {
                return Err(Error::InvalidInput(format!(
                    "table grid must be uniform (step {step} differs from {h})"
                )));
            }
        }
        Ok(Self {
            kind: FamilyKind::Table { points },
        })
    }

    /// Sample another family on `θ₀ + k·h`, `k = 0..n`.
    pub fn tabulate(&self, theta0: T, h: T, n: usize) -> Result<Self> {
        let mut points = Vec::with_capacity(n);
        for k in 0..n {
            let t = theta0 + h * T::from_usize_lossy(k);
            points.push((t, self.state_at(t)?));
        }
        Self::table(points)
    }

    pub fn kind(&self) -> &FamilyKind<T> {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            FamilyKind::Unitary { state, .. }
            | FamilyKind::NonHermitian { state, .. }
            | FamilyKind::Lindblad { state, .. } => state.dim(),
            FamilyKind::Thermal { hamiltonian } => hamiltonian.dim(),
            FamilyKind::Table { points } => points[0].1.dim(),
        }
    }

    /// `ρ(θ)`; unit trace except for non-Hermitian kinds, whose norm decays.
    pub fn state_at(&self, theta: T) -> Result<HermitianOperator<T>> {
        if !theta.is_finite() {
            return Err(Error::InvalidParameter(format!("parameter must be finite, got {theta}")));
        }
        Ok(match &self.kind {
            FamilyKind::Unitary { hamiltonian, state } => {
                let u = unitary_propagator(hamiltonian, theta);
                HermitianOperator::from_hermitian_part(&(&(&u * state.matrix()) * &u.adjoint()))
            }
            FamilyKind::NonHermitian { h, gamma, state } => {
                let heff = h.matrix() - &gamma.matrix().scale(ci(T::one()));
                let u = expm(&heff.scale(ci(-theta)));
                HermitianOperator::from_hermitian_part(&(&(&u * state.matrix()) * &u.adjoint()))
            }
            FamilyKind::Lindblad { generator, state } => {
                let prop = expm(&generator.matrix().scale_real(theta));
                let v = prop.mul_vec(&vectorize(state.matrix()));
                HermitianOperator::from_hermitian_part(&unvectorize(&v, state.dim()))
            }
            FamilyKind::Thermal { hamiltonian } => gibbs(hamiltonian, theta).0,
            FamilyKind::Table { points } => points[self.grid_index(points, theta)?].1.clone(),
        })
    }

    /// `ρ(θ)` validated as a density matrix.
    pub fn density_at(&self, theta: T) -> Result<DensityMatrix<T>> {
        DensityMatrix::from_hermitian(self.state_at(theta)?)
    }

    pub fn derivative_at(&self, theta: T) -> Result<HermitianOperator<T>> {
        Ok(self.at(theta)?.derivative)
    }

    /// State and derivative together.
    pub fn at(&self, theta: T) -> Result<FamilyPoint<T>> {
        let state = self.state_at(theta)?;
        let minus_i = ci(-T::one());
        let derivative = match &self.kind {
            FamilyKind::Unitary { hamiltonian, .. } => HermitianOperator::from_hermitian_part(
                &hamiltonian.matrix().commutator(state.matrix()).scale(minus_i),
            ),
            FamilyKind::NonHermitian { h, gamma, .. } => {
                let heff = h.matrix() - &gamma.matrix().scale(ci(T::one()));
                let rho = state.matrix();
                HermitianOperator::from_hermitian_part(
                    &(&(&heff * rho) - &(rho * &heff.adjoint())).scale(minus_i),
                )
            }
            FamilyKind::Lindblad { generator, .. } => generator.apply_hermitian(&state),
            FamilyKind::Thermal { hamiltonian } => gibbs(hamiltonian, theta).1,
            FamilyKind::Table { points } => table_derivative(points, self.grid_index(points, theta)?),
        };
        Ok(FamilyPoint { state, derivative })
    }

    fn grid_index(&self, points: &[(T, HermitianOperator<T>)], theta: T) -> Result<usize> {
        let h = points[1].0 - points[0].0;
        let k = ((theta - points[0].0) / h).round();
        let tol = T::lit(1e-9) * h;
        if k >= T::zero() {
            if let Some(i) = k.to_usize() {
                if i < points.len() && (points[i].0 - theta).abs() <= tol {
                    return Ok(i);
                }
            }
        }
        Err(Error::InvalidParameter(format!(
            "theta = {theta} is not a grid point of the table family"
        )))
    }
}

/// Gibbs state and its β-derivative `−(H − ⟨H⟩)ρ`.
fn gibbs<T: Real>(h: &HermitianOperator<T>, beta: T) -> (HermitianOperator<T>, HermitianOperator<T>) {
    let e = h.eig();
    let p = boltzmann(&e.values, beta);
    let mean: T = p.iter().zip(&e.values).map(|(p, l)| *p * *l).sum();
    let mut idx = 0;
    let rho = e.reconstruct_with(|_| {
        idx += 1;
        p[idx - 1]
    });
    let mut idx = 0;
    let d = e.reconstruct_with(|l| {
        idx += 1;
        -(l - mean) * p[idx - 1]
    });
    (
        HermitianOperator::from_hermitian_part(&rho),
        HermitianOperator::from_hermitian_part(&d),
    )
}

/// Boltzmann weights with the exponent shifted to avoid overflow.
pub fn boltzmann<T: Real>(energies: &[T], beta: T) -> Vec<T> {
    let shift = energies.iter().map(|&e| -beta * e).fold(T::neg_infinity(), T::max);
    let w: Vec<T> = energies.iter().map(|&e| (-beta * e - shift).exp()).collect();
    let z: T = w.iter().copied().sum();
    w.into_iter().map(|x| x / z).collect()
}

fn table_derivative<T: Real>(points: &[(T, HermitianOperator<T>)], i: usize) -> HermitianOperator<T> {
    let n = points.len();
    let h = points[1].0 - points[0].0;
    let m = |k: usize| points[k].1.matrix();
    let combo = |terms: &[(usize, f64)], denom: T| {
        let mut acc = ComplexMatrix::zeros(points[0].1.dim());
        for &(k, c) in terms {
            acc += &m(k).scale_real(T::lit(c));
        }
        HermitianOperator::from_hermitian_part(&acc.scale_real(T::one() / denom))
    };
    let two = T::lit(2.0);
    if n >= 5 && i >= 2 && i + 2 < n {
        // central difference at steps h and 2h combined by Richardson extrapolation
        combo(
            &[(i - 2, 1.0), (i - 1, -8.0), (i + 1, 8.0), (i + 2, -1.0)],
            T::lit(12.0) * h,
        )
    } else if i >= 1 && i + 1 < n {
        combo(&[(i - 1, -1.0), (i + 1, 1.0)], two * h)
    } else if n >= 3 && i == 0 {
        combo(&[(0, -3.0), (1, 4.0), (2, -1.0)], two * h)
    } else if n >= 3 {
        combo(&[(n - 3, 1.0), (n - 2, -4.0), (n - 1, 3.0)], two * h)
    } else {
        combo(&[(0, -1.0), (1, 1.0)], h)
    }
}
