use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::Roles;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::graph::{Dag, VertexId};
use crate::seed::rng;
use crate::Scalar;

/// Predicate a selection variable must satisfy for a draw to be kept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionPolicy {
    /// Value above zero, the mean of every centred variable.
    #[default]
    AboveMean,
    Above(f64),
    Below(f64),
}

impl SelectionPolicy {
    fn accepts(self, v: f64) -> bool {
        match self {
            SelectionPolicy::AboveMean => v > 0.0,
            SelectionPolicy::Above(t) => v > t,
            SelectionPolicy::Below(t) => v < t,
        }
    }
}

/// Attempts after which a too-low acceptance rate aborts sampling.
pub const REJECTION_WINDOW: u64 = 1 << 20;

/// Linear structural equations `X_v = Σ b_uv X_u + σ_v ε_v` over a DAG.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSem<T> {
    dag: Dag,
    /// `coef[u * n + v]`, zero unless `u -> v`.
    coef: Vec<T>,
    noise_sd: Vec<T>,
}

impl<T: Scalar> LinearSem<T> {
    /// Coefficients with magnitude uniform on `coef_range` and random sign;
    /// noise deviations uniform on `noise_range`.
    pub fn random(
        dag: Dag,
        coef_range: (f64, f64),
        noise_range: (f64, f64),
        seed: u64,
    ) -> Result<Self> {
        check_range("coefficient", coef_range)?;
        check_range("noise", noise_range)?;
        if noise_range.0 <= 0.0 {
            return Err(Error::InvalidConfig(
                "noise deviations must be positive".into(),
            ));
        }
        let mut rng = rng(seed);
        let n = dag.n();
        let mut coef = vec![T::zero(); n * n];
        for (u, v, _, _) in dag.edges().collect::<Vec<_>>() {
            let (from, to) = if dag.is_parent(u, v) { (u, v) } else { (v, u) };
            let magnitude = uniform(&mut rng, coef_range);
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            coef[from * n + to] = T::of(sign * magnitude);
        }
        let noise_sd = (0..n)
            .map(|_| T::of(uniform(&mut rng, noise_range)))
            .collect();
        Ok(Self {
            dag,
            coef,
            noise_sd,
        })
    }

    /// Same coefficient on every edge and the same noise everywhere.
    pub fn uniform(dag: Dag, coefficient: f64, noise_sd: f64) -> Result<Self> {
        if noise_sd <= 0.0 {
            return Err(Error::InvalidConfig(
                "noise deviations must be positive".into(),
            ));
        }
        let n = dag.n();
        let mut coef = vec![T::zero(); n * n];
        for u in 0..n {
            for v in 0..n {
                if dag.is_parent(u, v) {
                    coef[u * n + v] = T::of(coefficient);
                }
            }
        }
        Ok(Self {
            dag,
            coef,
            noise_sd: vec![T::of(noise_sd); n],
        })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn coefficient(&self, u: VertexId, v: VertexId) -> T {
        self.coef[u * self.dag.n() + v]
    }

    pub fn noise_sd(&self, v: VertexId) -> T {
        self.noise_sd[v]
    }

    /// `n_samples` rows of the observed variables, drawn conditionally on
    /// every selection variable satisfying `policy`. Columns follow ascending
    /// vertex id, the vertex order of the projected MAG.
    pub fn sample(
        &self,
        roles: &Roles,
        n_samples: usize,
        seed: u64,
        policy: SelectionPolicy,
    ) -> Result<Dataset<T>> {
        self.sample_counted(roles, n_samples, seed, policy)
            .map(|(d, _)| d)
    }

    /// [`LinearSem::sample`] together with the number of joint draws made.
    pub fn sample_counted(
        &self,
        roles: &Roles,
        n_samples: usize,
        seed: u64,
        policy: SelectionPolicy,
    ) -> Result<(Dataset<T>, u64)> {
        if n_samples == 0 {
            return Err(Error::InvalidConfig(
                "at least one sample is required".into(),
            ));
        }
        let n = self.dag.n();
        let order = self.dag.topological_order();
        let parents: Vec<Vec<(VertexId, f64)>> = (0..n)
            .map(|v| {
                (0..n)
                    .filter(|&u| self.dag.is_parent(u, v))
                    .map(|u| (u, self.coef[u * n + v].as_f64()))
                    .collect()
            })
            .collect();
        let noise: Vec<f64> = self.noise_sd.iter().map(|s| s.as_f64()).collect();
        let observed: Vec<VertexId> = roles.observed.iter().copied().collect();
        let columns = observed
            .iter()
            .map(|&v| self.dag.label(v).to_string())
            .collect();

        let mut rng = rng(seed);
        let mut x = vec![0.0f64; n];
        let mut values = Vec::with_capacity(n_samples * observed.len());
        let (mut attempts, mut accepted) = (0u64, 0u64);
        while (accepted as usize) < n_samples {
            for &v in &order {
                let e: f64 = StandardNormal.sample(&mut rng);
                x[v] = parents[v].iter().map(|&(u, b)| b * x[u]).sum::<f64>() + noise[v] * e;
            }
            attempts += 1;
            if roles.selection.iter().all(|&s| policy.accepts(x[s])) {
                accepted += 1;
                values.extend(observed.iter().map(|&v| T::of(x[v])));
            } else if attempts >= REJECTION_WINDOW && accepted * REJECTION_WINDOW < attempts {
                return Err(Error::SelectionTooRestrictive { attempts, accepted });
            }
        }
        Ok((Dataset::new(columns, values)?, attempts))
    }
}

fn check_range(what: &str, (lo, hi): (f64, f64)) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
        return Err(Error::InvalidConfig(format!(
            "{what} range ({lo}, {hi}) is not a valid interval"
        )));
    }
    Ok(())
}

fn uniform(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}
