use statrs::distribution::{ContinuousCDF, Normal};

use super::{CiBackend, CiQuery};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::linalg::inverse_or_pinv;
use crate::Scalar;

/// Fisher-Z partial-correlation test for Gaussian data.
///
/// Independence is accepted when `|sqrt(N - |z| - 3) · atanh(r)|` does not
/// exceed the two-sided normal critical value at level `alpha`.
#[derive(Clone, Debug)]
pub struct FisherZ<T> {
    corr: Vec<T>,
    n_vars: usize,
    n_samples: usize,
    alpha: f64,
}

/// Two-sided standard-normal critical value.
pub fn critical_value(alpha: f64) -> f64 {
    Normal::new(0.0, 1.0)
        .expect("standard normal")
        .inverse_cdf(1.0 - alpha / 2.0)
}

impl<T: Scalar> FisherZ<T> {
    pub fn new(data: &Dataset<T>, alpha: f64) -> Result<Self> {
        Self::from_correlation(data.correlation(), data.n_vars(), data.n_samples(), alpha)
    }

    /// From a precomputed `n_vars × n_vars` correlation matrix.
    pub fn from_correlation(
        corr: Vec<T>,
        n_vars: usize,
        n_samples: usize,
        alpha: f64,
    ) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        if corr.len() != n_vars * n_vars {
            return Err(Error::InvalidConfig(
                "correlation matrix has the wrong size".into(),
            ));
        }
        Ok(Self {
            corr,
            n_vars,
            n_samples,
            alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// Partial correlation of `x` and `y` given `z`, clamped away from ±1.
    pub fn partial_correlation(&self, x: VertexId, y: VertexId, z: &[VertexId]) -> T {
        let idx: Vec<VertexId> = [x, y].into_iter().chain(z.iter().copied()).collect();
        let k = idx.len();
        let r = if z.is_empty() {
            self.corr[x * self.n_vars + y]
        } else {
            let mut sub = vec![T::zero(); k * k];
            for (i, &a) in idx.iter().enumerate() {
                for (j, &b) in idx.iter().enumerate() {
                    sub[i * k + j] = self.corr[a * self.n_vars + b];
                }
            }
            let (p, _) = inverse_or_pinv(&sub, k);
            let denom = (p[0] * p[k + 1]).sqrt();
            if denom > T::zero() {
                -p[1] / denom
            } else {
                T::zero()
            }
        };
        let bound = T::one() - T::of(1e-12).max(T::epsilon());
        if r.is_nan() {
            T::zero()
        } else {
            r.max(-bound).min(bound)
        }
    }

    /// The Fisher-Z statistic for `q`.
    pub fn statistic(&self, q: &CiQuery) -> Result<T> {
        let dof = self.n_samples as i64 - q.z.len() as i64 - 3;
        if dof <= 0 {
            return Err(Error::InsufficientSamples {
                samples: self.n_samples,
                cond_size: q.z.len(),
            });
        }
        let z: Vec<VertexId> = q.z.iter().copied().collect();
        let r = self.partial_correlation(q.x, q.y, &z);
        Ok(T::of(dof as f64).sqrt() * r.atanh())
    }
}

impl<T: Scalar> CiBackend for FisherZ<T> {
    fn n_vars(&self) -> usize {
        self.n_vars
    }

    fn independent(&self, q: &CiQuery, alpha: Option<f64>) -> Result<bool> {
        let t = self.statistic(q)?.as_f64().abs();
        Ok(t <= critical_value(alpha.unwrap_or(self.alpha)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn critical_values() {
        assert!((critical_value(0.05) - 1.959963984540054).abs() < 1e-9);
        assert!((critical_value(0.01) - 2.5758293035489).abs() < 1e-9);
    }

    #[test]
    fn zero_correlation_is_independent_at_any_level() {
        let fz = FisherZ::from_correlation(vec![1.0f64, 0.0, 0.0, 1.0], 2, 50, 0.999).unwrap();
        let q = CiQuery::new(0, 1, VertexSet::new()).unwrap();
        assert_eq!(fz.statistic(&q).unwrap(), 0.0);
        assert!(fz.independent(&q, None).unwrap());
    }

    #[test]
    fn insufficient_samples() {
        let corr = vec![1.0f64, 0.1, 0.2, 0.1, 1.0, 0.3, 0.2, 0.3, 1.0];
        let fz = FisherZ::from_correlation(corr, 3, 4, 0.05).unwrap();
        let q = CiQuery::new(0, 1, VertexSet::from([2])).unwrap();
        assert!(matches!(
            fz.independent(&q, None),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn partial_correlation_matches_closed_form() {
        let (rxy, rxz, ryz) = (0.5f64, 0.3, 0.4);
        let corr = vec![1.0, rxy, rxz, rxy, 1.0, ryz, rxz, ryz, 1.0];
        let fz = FisherZ::from_correlation(corr, 3, 100, 0.05).unwrap();
        let expected = (rxy - rxz * ryz) / ((1.0 - rxz * rxz) * (1.0 - ryz * ryz)).sqrt();
        assert!((fz.partial_correlation(0, 1, &[2]) - expected).abs() < 1e-12);
    }

    #[test]
    fn singular_submatrix_does_not_produce_nan() {
        // x and z are identical columns.
        let corr = vec![1.0f64, 0.5, 1.0, 0.5, 1.0, 0.5, 1.0, 0.5, 1.0];
        let fz = FisherZ::from_correlation(corr, 3, 100, 0.05).unwrap();
        let r = fz.partial_correlation(0, 1, &[2]);
        assert!(r.is_finite() && r.abs() < 1.0);
        let q = CiQuery::new(0, 1, VertexSet::from([2])).unwrap();
        assert!(fz.statistic(&q).unwrap().is_finite());
    }

    #[test]
    fn detects_a_direct_effect() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut values = Vec::new();
        for _ in 0..2000 {
            let x: f64 = StandardNormal.sample(&mut rng);
            let e: f64 = StandardNormal.sample(&mut rng);
            values.extend([x, x + e]);
        }
        let data = Dataset::new(vec!["X".into(), "Y".into()], values).unwrap();
        let fz = FisherZ::new(&data, 0.05).unwrap();
        let q = CiQuery::new(0, 1, VertexSet::new()).unwrap();
        assert!(!fz.independent(&q, None).unwrap());
        assert!((fz.partial_correlation(0, 1, &[]) - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.05);
    }
}
