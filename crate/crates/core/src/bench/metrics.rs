use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MixedGraph;

/// Adjacency-level precision, recall and their harmonic mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkeletonMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl SkeletonMetrics {
    pub fn from_counts(true_positive: usize, learned: usize, truth: usize) -> Self {
        let precision = if learned == 0 {
            1.0
        } else {
            true_positive as f64 / learned as f64
        };
        let recall = if truth == 0 {
            1.0
        } else {
            true_positive as f64 / truth as f64
        };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Self {
            precision,
            recall,
            f1,
        }
    }
}

fn labelled_skeleton(g: &MixedGraph) -> BTreeSet<(String, String)> {
    g.skeleton()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (g.label(u).to_string(), g.label(v).to_string());
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

/// Compares adjacencies by vertex label; marks are ignored.
pub fn skeleton_metrics(learned: &MixedGraph, truth: &MixedGraph) -> Result<SkeletonMetrics> {
    let names = |g: &MixedGraph| g.labels().iter().cloned().collect::<BTreeSet<_>>();
    if names(learned) != names(truth) {
        return Err(Error::InvalidComparison(
            "graphs are over different vertex sets".into(),
        ));
    }
    let (l, t) = (labelled_skeleton(learned), labelled_skeleton(truth));
    Ok(SkeletonMetrics::from_counts(
        l.intersection(&t).count(),
        l.len(),
        t.len(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Mag, Pag};
    use approx::assert_relative_eq;

    const FIG1: &str = "vertices: T W Y Z\nY <-> W\nW -> Z\nW -> T\nT -> Z\n";

    #[test]
    fn identity() {
        let mag = Mag::parse(FIG1).unwrap();
        let m = skeleton_metrics(&Pag::from_mag(&mag), &mag).unwrap();
        assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn one_missing_edge() {
        let mag = Mag::parse(FIG1).unwrap();
        let learned = Pag::parse("vertices: Z Y W T\nY o-o W\nW o-o Z\nW o-o T\n").unwrap();
        let m = skeleton_metrics(&learned, &mag).unwrap();
        assert_eq!(m.precision, 1.0);
        assert_eq!(m.recall, 0.75);
        assert_relative_eq!(m.f1, 6.0 / 7.0);
    }

    #[test]
    fn conventions() {
        let empty = Mag::parse("vertices: A B\n").unwrap();
        let m = skeleton_metrics(&empty, &empty).unwrap();
        assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
        let edge = Mag::parse("vertices: A B\nA -> B\n").unwrap();
        let m = skeleton_metrics(&empty, &edge).unwrap();
        assert_eq!((m.precision, m.recall, m.f1), (1.0, 0.0, 0.0));
        let other = Mag::parse("vertices: A C\n").unwrap();
        assert!(matches!(
            skeleton_metrics(&other, &edge),
            Err(Error::InvalidComparison(_))
        ));
    }
}
