mod common;

use cfa_core::builtin_scorers::LogisticObjective;
use cfa_core::diversity::{cognitive_diversity, DiversityMatrix};
use cfa_core::fusion::{fuse_all, FusionConfig};
use cfa_core::scoring::{Orientation, Ranked, ScoringSystem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn systems_strategy(t: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=6).prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(0.0f64..1.0, n), t))
}

fn letters(t: usize) -> Vec<String> {
    (0..t).map(|k| ((b'A' + k as u8) as char).to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fusion_matches_brute_force(scores in systems_strategy(3), perf in prop::collection::vec(0.3f64..1.0, 3)) {
        let names = letters(3);
        let systems: Vec<ScoringSystem> = names
            .iter()
            .zip(&scores)
            .map(|(n, s)| ScoringSystem::higher_better(n.clone(), s.clone()).unwrap())
            .collect();
        let ds_pool = common::ds(&scores);
        prop_assume!(ds_pool.iter().all(|&d| d > 0.0));

        let out = fuse_all(&systems, &FusionConfig::default(), Some(&perf)).unwrap();
        let mut k = 0;
        for subset in common::subsets(3) {
            let member_scores: Vec<Vec<f64>> = subset.iter().map(|&i| scores[i].clone()).collect();
            let member_ds: Vec<f64> = subset.iter().map(|&i| ds_pool[i]).collect();
            let member_p: Vec<f64> = subset.iter().map(|&i| perf[i]).collect();
            for space in ["SC", "RC"] {
                for weighting in ["AC", "WCDS", "WCP"] {
                    let cs = &out[k];
                    k += 1;
                    let expected = common::combine(&member_scores, space, weighting, &member_ds, &member_p);
                    let label: String = subset.iter().map(|&i| names[i].as_str()).collect();
                    prop_assert_eq!(cs.label(), format!("{label}/{space}/{weighting}"));
                    for (got, want) in cs.values().iter().zip(&expected) {
                        prop_assert!((got - want).abs() <= 1e-12, "{} {} vs {}", cs.label(), got, want);
                    }
                    let want_ranks = common::ranks(&expected, space == "SC");
                    prop_assert_eq!(cs.ranks().to_vec(), want_ranks, "{}", cs.label());
                }
            }
        }
        prop_assert_eq!(k, out.len());
    }

    #[test]
    fn ranks_and_rsc_match_brute_force(scores in prop::collection::vec(-5.0f64..5.0, 1..40)) {
        let sys = ScoringSystem::higher_better("A", scores.clone()).unwrap();
        prop_assert_eq!(sys.ranks().to_vec(), common::ranks(&scores, true));
        prop_assert_eq!(sys.rsc().to_vec(), common::rsc(&scores));
        let low = ScoringSystem::new("L", scores.clone(), Orientation::LowerBetter).unwrap();
        prop_assert_eq!(Ranked::ranks(&low).to_vec(), common::ranks(&scores, false));
    }

    #[test]
    fn diversity_matches_brute_force(scores in (2usize..6).prop_flat_map(|m| prop::collection::vec(prop::collection::vec(0.0f64..1.0, 7), m))) {
        let systems: Vec<ScoringSystem> = scores
            .iter()
            .enumerate()
            .map(|(i, s)| ScoringSystem::higher_better(format!("S{i}"), s.clone()).unwrap())
            .collect();
        let matrix = DiversityMatrix::compute(&systems).unwrap();
        for (got, want) in matrix.ds().iter().zip(common::ds(&scores)) {
            prop_assert!((got - want).abs() <= 1e-12);
        }
        let direct = cognitive_diversity(&systems[0], &systems[1]).unwrap();
        prop_assert!((direct - common::cd(&scores[0], &scores[1])).abs() <= 1e-12);
    }
}

#[test]
fn subset_enumeration_matches_bitmask() {
    for t in 2..=7 {
        let got = cfa_core::fusion::enumerate_subsets(t, 2).unwrap();
        assert_eq!(got, common::subsets(t), "t={t}");
    }
}

#[test]
fn logistic_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6772_6164);
    for trial in 0..20 {
        let n = rng.gen_range(3..12);
        let p = rng.gen_range(1..5);
        let intercept = trial % 2 == 0;
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        let y: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let l2 = rng.gen_range(0.0..0.1);
        let params: Vec<f64> = (0..p + usize::from(intercept))
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();

        let objective = LogisticObjective { x: &x, y: &y, l2, intercept };
        let oracle_loss = common::logistic_loss(&x, &y, &params, l2, intercept);
        assert!((objective.loss(&params) - oracle_loss).abs() < 1e-12);

        let analytic = objective.gradient(&params);
        let numeric = common::numeric_gradient(
            |w| common::logistic_loss(&x, &y, w, l2, intercept),
            &params,
            1e-5,
        );
        let diff: f64 = analytic.iter().zip(&numeric).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let scale: f64 = numeric.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-8);
        assert!(diff / scale < 1e-6, "trial {trial}: relative error {}", diff / scale);
    }
}
