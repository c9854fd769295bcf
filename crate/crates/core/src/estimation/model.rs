use std::f64::consts::PI;

use rand::{Rng, RngCore};
use rand_distr::{Cauchy, Distribution, Exp, Normal};

use crate::error::{Error, Result};
use crate::numeric::integrate_real_line;

/// Normalisation tolerance enforced on construction.
pub const NORM_TOL: f64 = 1e-6;

const QUAD_TOL: f64 = 1e-10;

/// Continuous one-parameter model `p(x|θ)`.
pub trait ContinuousModel: Sync {
    fn density(&self, x: f64, theta: f64) -> f64;

    /// `∂p(x|θ)/∂θ`; central difference unless overridden.
    fn density_derivative(&self, x: f64, theta: f64) -> f64 {
        let h = 1e-5 * (1.0 + theta.abs());
        (self.density(x, theta + h) - self.density(x, theta - h)) / (2.0 * h)
    }

    fn sample(&self, theta: f64, rng: &mut dyn RngCore) -> f64;

    fn analytic_f1(&self, _theta: f64) -> Option<f64> {
        None
    }

    fn analytic_f2(&self, _theta: f64) -> Option<f64> {
        None
    }

    /// False when the support moves with `θ`, so `∂p/∂θ` carries a boundary term.
    fn is_regular(&self) -> bool {
        true
    }
}

/// Fails unless `∫ p(x|θ) dx` is within [`NORM_TOL`] of one.
pub fn check_normalization(model: &dyn ContinuousModel, theta: f64) -> Result<()> {
    let total = integrate_real_line(&mut |x| model.density(x, theta), QUAD_TOL)?;
    if (total - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidInput(format!(
            "density integrates to {total}, deviation {:e}",
            (total - 1.0).abs()
        )));
    }
    Ok(())
}

/// `f_α(θ) = ∫ |∂p/∂θ|^α p^{1−α} dx`; analytic values for `α ∈ {1, 2}` when provided.
pub fn model_fisher(model: &dyn ContinuousModel, theta: f64, alpha: f64) -> Result<f64> {
    crate::matcore::check_order(alpha)?;
    if !model.is_regular() {
        return Err(Error::Undefined(
            "model support depends on the parameter; f_alpha has no density form".into(),
        ));
    }
    if alpha == 1.0 {
        if let Some(v) = model.analytic_f1(theta) {
            return Ok(v);
        }
    }
    if alpha == 2.0 {
        if let Some(v) = model.analytic_f2(theta) {
            return Ok(v);
        }
    }
    if alpha.is_infinite() {
        return Err(Error::InvalidParameter("f_alpha needs finite alpha".into()));
    }
    integrate_real_line(
        &mut |x| {
            let p = model.density(x, theta);
            let dp = model.density_derivative(x, theta).abs();
            if p <= 0.0 || dp == 0.0 {
                0.0
            } else if alpha == 1.0 {
                dp
            } else {
                dp.powf(alpha) * p.powf(1.0 - alpha)
            }
        },
        QUAD_TOL,
    )
}

/// Shape of a location model `p(x|θ) = p₀(x − θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocationKind {
    Gaussian,
    Cauchy,
    Laplace,
    /// `λ e^{−λ(x−θ)}` on `x ≥ θ`; skewed and not regular.
    ShiftedExponential,
}

impl std::str::FromStr for LocationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(Self::Gaussian),
            "cauchy" | "lorentz" => Ok(Self::Cauchy),
            "laplace" => Ok(Self::Laplace),
            "exponential" | "shifted_exponential" => Ok(Self::ShiftedExponential),
            other => Err(Error::InvalidInput(format!("unknown model '{other}'"))),
        }
    }
}

/// Location family with scale `σ` (Gaussian), `γ` (Cauchy), `b` (Laplace) or `1/λ` (exponential).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocationModel {
    kind: LocationKind,
    scale: f64,
}

impl LocationModel {
    pub fn new(kind: LocationKind, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {scale}")));
        }
        let m = Self { kind, scale };
        check_normalization(&m, 0.0)?;
        Ok(m)
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(LocationKind::Gaussian, sigma)
    }

    pub fn cauchy(gamma: f64) -> Result<Self> {
        Self::new(LocationKind::Cauchy, gamma)
    }

    pub fn laplace(b: f64) -> Result<Self> {
        Self::new(LocationKind::Laplace, b)
    }

    pub fn shifted_exponential(mean_excess: f64) -> Result<Self> {
        Self::new(LocationKind::ShiftedExponential, mean_excess)
    }

    pub fn kind(&self) -> LocationKind {
        self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn base(&self, u: f64) -> f64 {
        let s = self.scale;
        match self.kind {
            LocationKind::Gaussian => (-0.5 * (u / s).powi(2)).exp() / (s * (2.0 * PI).sqrt()),
            LocationKind::Cauchy => s / (PI * (s * s + u * u)),
            LocationKind::Laplace => (-u.abs() / s).exp() / (2.0 * s),
            LocationKind::ShiftedExponential => {
                if u < 0.0 {
                    0.0
                } else {
                    (-u / s).exp() / s
                }
            }
        }
    }

    /// `−p₀'(u)`, the θ-derivative of `p₀(x − θ)`.
    fn base_slope(&self, u: f64) -> f64 {
        let s = self.scale;
        match self.kind {
            LocationKind::Gaussian => u / (s * s) * self.base(u),
            LocationKind::Cauchy => 2.0 * u * s / (PI * (s * s + u * u).powi(2)),
            LocationKind::Laplace => u.signum() / s * self.base(u),
            LocationKind::ShiftedExponential => self.base(u) / s,
        }
    }
}

impl ContinuousModel for LocationModel {
    fn density(&self, x: f64, theta: f64) -> f64 {
        self.base(x - theta)
    }

    fn density_derivative(&self, x: f64, theta: f64) -> f64 {
        self.base_slope(x - theta)
    }

    fn sample(&self, theta: f64, rng: &mut dyn RngCore) -> f64 {
        let s = self.scale;
        match self.kind {
            LocationKind::Gaussian => Normal::new(theta, s).expect("positive scale").sample(rng),
            LocationKind::Cauchy => Cauchy::new(theta, s).expect("positive scale").sample(rng),
            LocationKind::Laplace => {
                let u: f64 = rng.random::<f64>() - 0.5;
                theta - s * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
            LocationKind::ShiftedExponential => theta + Exp::new(1.0 / s).expect("positive rate").sample(rng),
        }
    }

    fn analytic_f1(&self, _theta: f64) -> Option<f64> {
        let s = self.scale;
        match self.kind {
            LocationKind::Gaussian => Some((2.0 / PI).sqrt() / s),
            LocationKind::Cauchy => Some(2.0 / (PI * s)),
            LocationKind::Laplace => Some(1.0 / s),
            LocationKind::ShiftedExponential => None,
        }
    }

    fn analytic_f2(&self, _theta: f64) -> Option<f64> {
        let s = self.scale;
        match self.kind {
            LocationKind::Gaussian => Some(1.0 / (s * s)),
            LocationKind::Cauchy => Some(1.0 / (2.0 * s * s)),
            LocationKind::Laplace => Some(1.0 / (s * s)),
            LocationKind::ShiftedExponential => None,
        }
    }

    fn is_regular(&self) -> bool {
        self.kind != LocationKind::ShiftedExponential
    }
}

/// `1/(2 p(θ|θ))` for a location model, the asymptotic sample-median dispersion.
pub fn median_dispersion_limit(model: &dyn ContinuousModel, theta: f64) -> f64 {
    0.5 / model.density(theta, theta)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::stream_rng;

    struct Unnormalised;
    impl ContinuousModel for Unnormalised {
        fn density(&self, x: f64, theta: f64) -> f64 {
            0.9 * (-(x - theta).powi(2) / 2.0).exp() / (2.0 * PI).sqrt()
        }
        fn sample(&self, theta: f64, _rng: &mut dyn RngCore) -> f64 {
            theta
        }
    }

    #[test]
    fn analytic_fisher_matches_quadrature() {
        for m in [
            LocationModel::gaussian(1.3).unwrap(),
            LocationModel::cauchy(0.7).unwrap(),
            LocationModel::laplace(1.0).unwrap(),
        ] {
            for alpha in [1.0, 2.0] {
                let analytic = model_fisher(&m, 0.4, alpha).unwrap();
                let quad = integrate_real_line(
                    &mut |x| {
                        let p = m.density(x, 0.4);
                        let dp = m.density_derivative(x, 0.4).abs();
                        if p > 0.0 { dp.powf(alpha) * p.powf(1.0 - alpha) } else { 0.0 }
                    },
                    1e-11,
                )
                .unwrap();
                assert!((analytic - quad).abs() < 1e-6 * analytic.max(1.0), "{m:?} {alpha}: {analytic} vs {quad}");
            }
        }
    }

    #[test]
    fn cauchy_and_gaussian_values() {
        let c = LocationModel::cauchy(1.0).unwrap();
        assert!((model_fisher(&c, 0.0, 1.0).unwrap() - 2.0 / PI).abs() < 1e-15);
        let g = LocationModel::gaussian(1.0).unwrap();
        assert!((1.0 / model_fisher(&g, 0.0, 1.0).unwrap() - 1.2533141373155).abs() < 1e-12);
        assert!((median_dispersion_limit(&c, 0.0) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn construction_checks() {
        assert!(LocationModel::gaussian(0.0).is_err());
        assert!(check_normalization(&Unnormalised, 0.0).is_err());
        let e = LocationModel::shifted_exponential(1.0).unwrap();
        assert!(matches!(model_fisher(&e, 0.0, 1.0), Err(Error::Undefined(_))));
        assert!("laplace".parse::<LocationKind>().is_ok());
        assert!("beta".parse::<LocationKind>().is_err());
    }

    #[test]
    fn laplace_sampler_has_right_scale() {
        let m = LocationModel::laplace(2.0).unwrap();
        let mut rng = stream_rng(7, 0);
        let n = 200_000;
        let mad: f64 = (0..n).map(|_| m.sample(1.0, &mut rng) - 1.0).map(f64::abs).sum::<f64>() / n as f64;
        // E|X − θ| = b
        assert!((mad - 2.0).abs() < 0.03, "{mad}");
    }
}
