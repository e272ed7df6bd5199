use super::{CiBackend, CiQuery};
use crate::error::Result;
use crate::graph::Mag;

/// Answers CI queries by m-separation in a known MAG.
#[derive(Clone, Debug)]
pub struct OracleTester {
    mag: Mag,
}

impl OracleTester {
    pub fn new(mag: Mag) -> Self {
        Self { mag }
    }

    pub fn mag(&self) -> &Mag {
        &self.mag
    }
}

impl CiBackend for OracleTester {
    fn n_vars(&self) -> usize {
        self.mag.n()
    }

    fn independent(&self, q: &CiQuery, _alpha: Option<f64>) -> Result<bool> {
        self.mag.m_separated(q.x, q.y, &q.z)
    }

    fn is_exact(&self) -> bool {
        true
    }
}
