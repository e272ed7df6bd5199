mod common;

use common::{random_case, subsets};
use lmarvel::graph::{has_inducing_path, has_inducing_path_bruteforce, latent_project};
use lmarvel::removability::{find_removable, is_removable_by_definition, is_removable_graphical};
use lmarvel::{Error, Mag, MixedGraph, VertexSet};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 256,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn m_separation_is_symmetric_and_matches_path_enumeration(seed in 0u64..1_000_000) {
        let Some(c) = random_case(seed, 9, 3, 2) else { return Ok(()) };
        let vs: Vec<usize> = c.mag.vertex_ids().collect();
        for &x in &vs {
            for &y in vs.iter().filter(|&&y| y != x) {
                let rest: Vec<usize> = vs.iter().copied().filter(|&v| v != x && v != y).collect();
                for z in subsets(&rest).take(64) {
                    let fast = c.mag.m_separated(x, y, &z).unwrap();
                    prop_assert_eq!(fast, c.mag.m_separated(y, x, &z).unwrap());
                    prop_assert_eq!(fast, c.mag.m_separated_bruteforce(x, y, &z).unwrap());
                }
            }
        }
    }

    #[test]
    fn projection_is_a_maximal_ancestral_graph(seed in 0u64..1_000_000) {
        let Some(c) = random_case(seed, 9, 3, 2) else { return Ok(()) };
        prop_assert!(Mag::new(c.mag.as_graph().clone()).is_ok());
        prop_assert!(c.mag.is_maximal().unwrap());
        prop_assert_eq!(c.mag.n(), c.roles.observed.len());
    }

    #[test]
    fn adjacency_iff_inducing_path(seed in 0u64..1_000_000) {
        let Some(c) = random_case(seed, 9, 3, 2) else { return Ok(()) };
        let obs: Vec<usize> = c.roles.observed.iter().copied().collect();
        for (i, &x) in obs.iter().enumerate() {
            for (j, &y) in obs.iter().enumerate().skip(i + 1) {
                let fast = has_inducing_path(&c.dag, x, y, &c.roles.latent, &c.roles.selection).unwrap();
                let slow = has_inducing_path_bruteforce(&c.dag, x, y, &c.roles.latent, &c.roles.selection).unwrap();
                prop_assert_eq!(fast, slow);
                prop_assert_eq!(fast, c.mag.is_adjacent(i, j));
            }
        }
    }

    #[test]
    fn text_format_round_trips(seed in 0u64..1_000_000) {
        let Some(c) = random_case(seed, 12, 3, 2) else { return Ok(()) };
        prop_assert_eq!(Mag::parse(&c.mag.to_text()).unwrap(), c.mag.clone());
        prop_assert_eq!(MixedGraph::parse(&c.dag.to_text()).unwrap(), c.dag.as_graph().clone());
    }

    #[test]
    fn markov_boundary_separates_and_is_minimal(seed in 0u64..1_000_000) {
        let Some(c) = random_case(seed, 10, 3, 2) else { return Ok(()) };
        let all: VertexSet = c.mag.vertex_ids().collect();
        for x in c.mag.vertex_ids() {
            let mb = c.mag.markov_boundary(x).unwrap();
            prop_assert!(!mb.contains(&x));
            for y in c.mag.vertex_ids().filter(|&y| y != x) {
                let mut rest = all.clone();
                rest.remove(&x);
                rest.remove(&y);
                // Total conditioning characterises the boundary.
                prop_assert_eq!(mb.contains(&y), !c.mag.m_separated(x, y, &rest).unwrap());
                if !mb.contains(&y) {
                    prop_assert!(c.mag.m_separated(x, y, &mb).unwrap());
                }
            }
        }
    }

    #[test]
    fn nonadjacent_boundary_members_separate_inside_the_boundary(seed in 0u64..1_000_000) {
        let Some(c) = random_case(seed, 9, 3, 2) else { return Ok(()) };
        for x in c.mag.vertex_ids() {
            let mb = c.mag.markov_boundary(x).unwrap();
            for &y in mb.iter().filter(|&&y| !c.mag.is_adjacent(x, y)) {
                let rest: Vec<usize> = mb.iter().copied().filter(|&v| v != y).collect();
                prop_assert!(subsets(&rest).any(|w| c.mag.m_separated(x, y, &w).unwrap()));
            }
        }
    }

    #[test]
    fn removability_views_agree(seed in 0u64..1_000_000) {
        let Some(c) = random_case(seed, 9, 3, 2) else { return Ok(()) };
        for x in c.mag.vertex_ids() {
            let verdict = is_removable_graphical(&c.mag, x).unwrap();
            prop_assert_eq!(verdict.removable, is_removable_by_definition(&c.mag, x).unwrap());
            prop_assert_eq!(verdict.removable, verdict.witness.is_none());
        }
        let x = find_removable(&c.mag).unwrap();
        prop_assert!(is_removable_by_definition(&c.mag, x).unwrap());
    }

    #[test]
    fn deleting_a_removable_vertex_commutes_with_projection(seed in 0u64..1_000_000) {
        let Some(c) = random_case(seed, 10, 3, 2) else { return Ok(()) };
        for x in c.mag.vertex_ids() {
            let mut observed = c.roles.observed.clone();
            observed.remove(&c.dag_vertex(x));
            let direct = latent_project(&c.dag, &observed, &c.roles.selection).unwrap();
            let keep: VertexSet = c.mag.vertex_ids().filter(|&v| v != x).collect();
            let induced = c.mag.induced(&keep).unwrap();
            prop_assert_eq!(
                direct.same_structure(&induced),
                is_removable_graphical(&c.mag, x).unwrap().removable
            );
        }
    }

    #[test]
    fn removed_vertex_boundary_within_pa_plus_bound(seed in 0u64..1_000_000) {
        let Some(c) = random_case(seed, 12, 3, 2) else { return Ok(()) };
        let x = find_removable(&c.mag).unwrap();
        prop_assert!(c.mag.markov_boundary(x).unwrap().len() <= c.mag.delta_plus());
    }
}

#[test]
fn undirected_four_cycle_has_no_removable_vertex() {
    let cycle = Mag::parse("vertices: A B C D\nA -- B\nB -- C\nC -- D\nD -- A\n").unwrap();
    assert!(matches!(
        find_removable(&cycle),
        Err(Error::ChordalityViolated)
    ));
    for x in cycle.vertex_ids() {
        assert!(!is_removable_by_definition(&cycle, x).unwrap());
    }
}
