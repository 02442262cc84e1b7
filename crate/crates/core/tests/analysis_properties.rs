//! Property tests for the analysis invariants: extraction equivalence
//! against a brute-force pass, filtering monotonicity, matrix symmetry
//! and the correlation identities.

mod common;

use std::collections::BTreeMap;

use keydyn::analysis::{
    consistency_matrix, extract_bigram_observations, match_profile, rank_bigrams_by_frequency,
    DailyRanking, Profile,
};
use keydyn::stats::{fractional_ranks, pearson, spearman};
use keydyn::types::{AnalysisConfig, Bigram, BigramStats, KeyEvent, KeyStream};
use proptest::prelude::*;

fn key_token() -> impl Strategy<Value = String> {
    prop_oneof![
        4 => proptest::char::range('a', 'z').prop_map(|c| c.to_string()),
        2 => proptest::char::range('A', 'Z').prop_map(|c| c.to_string()),
        1 => proptest::char::range('0', '9').prop_map(|c| c.to_string()),
        1 => Just("BACKSPACE".to_string()),
        1 => Just("LEFT_ARROW".to_string()),
    ]
}

prop_compose! {
    fn key_stream()(
        start in 0i64..4_000_000_000_000i64,
        tz in -840i32..=840i32,
        // Gap range straddles the 1000 ms boundary; 0 exercises collisions.
        steps in proptest::collection::vec((0i64..=1500, key_token()), 0..250),
    ) -> KeyStream {
        let mut stream = KeyStream::new("p1", tz);
        let mut t = start;
        for (dt, key) in steps {
            t += dt;
            stream.events.push(KeyEvent::new(t, key));
        }
        stream
    }
}

proptest! {
    #[test]
    fn extraction_matches_brute_force_oracle(stream in key_stream()) {
        let config = AnalysisConfig::default();
        let (observations, report) = extract_bigram_observations(&stream, &config);
        let expected = common::oracle_extract(&stream, i64::from(config.gap_threshold_ms));
        prop_assert_eq!(common::observation_tuples(&observations), expected);
        prop_assert_eq!(report.observations, observations.len());
    }

    #[test]
    fn extraction_is_case_fold_invariant(stream in key_stream()) {
        let mut lowered = stream.clone();
        for ev in &mut lowered.events {
            if ev.key.len() == 1 {
                ev.key = ev.key.to_lowercase();
            }
        }
        let config = AnalysisConfig::default();
        let (a, _) = extract_bigram_observations(&stream, &config);
        let (b, _) = extract_bigram_observations(&lowered, &config);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn raising_the_threshold_never_removes_observations(stream in key_stream()) {
        let tight = AnalysisConfig { gap_threshold_ms: 700, ..AnalysisConfig::default() };
        let loose = AnalysisConfig { gap_threshold_ms: 1400, ..AnalysisConfig::default() };
        let (a, _) = extract_bigram_observations(&stream, &tight);
        let (b, _) = extract_bigram_observations(&stream, &loose);
        // Every tight observation appears in the loose set, in order.
        let mut b_iter = b.iter();
        for obs in &a {
            prop_assert!(b_iter.any(|o| o == obs), "lost {obs:?} when raising the threshold");
        }
    }

    #[test]
    fn frequency_counts_conserve_observations(stream in key_stream()) {
        let config = AnalysisConfig::default();
        let (observations, _) = extract_bigram_observations(&stream, &config);
        let ranked = rank_bigrams_by_frequency(&observations);
        let total: u64 = ranked.iter().map(|(_, c)| *c).sum();
        prop_assert_eq!(total as usize, observations.len());
        prop_assert_eq!(
            observations.len(),
            common::oracle_extract(&stream, 1000).len()
        );
        // Strictly sorted: descending count, ties lexicographic.
        for w in ranked.windows(2) {
            prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
        }
    }
}

#[test]
fn threshold_boundary_is_inclusive_above_exclusive() {
    for threshold in [1u32, 250, 1000] {
        let config = AnalysisConfig {
            gap_threshold_ms: threshold,
            ..AnalysisConfig::default()
        };
        let mut at = KeyStream::new("p1", 0);
        at.events.push(KeyEvent::new(0, "a"));
        at.events.push(KeyEvent::new(i64::from(threshold), "b"));
        assert_eq!(extract_bigram_observations(&at, &config).0.len(), 1);

        let mut above = KeyStream::new("p1", 0);
        above.events.push(KeyEvent::new(0, "a"));
        above.events.push(KeyEvent::new(i64::from(threshold) + 1, "b"));
        assert_eq!(extract_bigram_observations(&above, &config).0.len(), 0);
    }
}

fn finite_f64() -> impl Strategy<Value = f64> {
    (-1_000_000i64..1_000_000i64).prop_map(|v| v as f64 / 100.0)
}

proptest! {
    #[test]
    fn spearman_self_symmetry_and_monotone_invariance(
        x in proptest::collection::vec(finite_f64(), 3..40),
        y_seed in proptest::collection::vec(finite_f64(), 3..40),
    ) {
        let n = x.len().min(y_seed.len());
        let x = &x[..n];
        let y = &y_seed[..n];
        let distinct = x.iter().any(|v| *v != x[0]);
        prop_assume!(distinct);
        prop_assume!(y.iter().any(|v| *v != y[0]));

        prop_assert!((spearman(x, x).unwrap() - 1.0).abs() < 1e-12);
        let xy = spearman(x, y).unwrap();
        let yx = spearman(y, x).unwrap();
        prop_assert!((xy - yx).abs() < 1e-12);

        // Strictly increasing transform of x leaves ranks untouched.
        let cubed: Vec<f64> = x.iter().map(|v| v.powi(3)).collect();
        prop_assert_eq!(spearman(&cubed, y).unwrap(), xy);
    }

    #[test]
    fn pearson_affine_identities(
        x in proptest::collection::vec(finite_f64(), 2..40),
        a in prop_oneof![Just(-3.0), Just(-0.5), Just(0.5), Just(2.0)],
        b in -100.0f64..100.0,
        c in 0.25f64..4.0,
        d in -100.0f64..100.0,
    ) {
        prop_assume!(x.iter().any(|v| *v != x[0]));
        let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let r = pearson(&x, &y).unwrap();
        let expected = if a > 0.0 { 1.0 } else { -1.0 };
        prop_assert!((r - expected).abs() < 1e-9);

        // Positive affine transforms of either argument change nothing.
        let scaled: Vec<f64> = x.iter().map(|v| c * v + d).collect();
        let r2 = pearson(&scaled, &y).unwrap();
        prop_assert!((r2 - r).abs() < 1e-9);
    }

    #[test]
    fn ranks_are_a_permutation_without_ties(
        x in proptest::collection::hash_set(-100_000i64..100_000, 1..50)
    ) {
        let values: Vec<f64> = x.iter().map(|v| *v as f64).collect();
        let mut ranks = fractional_ranks(&values).unwrap();
        ranks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected: Vec<f64> = (1..=values.len()).map(|i| i as f64).collect();
        prop_assert_eq!(ranks, expected);
    }
}

/// Two-profile oracle: a fresh session drawn from typist A's timing laws
/// (new noise, same laws) must match A, not an independently drawn B.
#[test]
fn identification_picks_the_generating_profile() {
    use keydyn::analysis::compute_bigram_stats;
    use keydyn::synth::{generate_stream, ModelParams, TypistModel};

    let params = ModelParams {
        alphabet_size: 6,
        support_size: 30,
        days: 5,
        keystrokes_per_day: 2000,
        ..ModelParams::default()
    };
    let support = TypistModel::sample(900, &params).unwrap().support();
    let model_a = TypistModel::sample_with_support(901, &support, &params).unwrap();
    let model_b = TypistModel::sample_with_support(902, &support, &params).unwrap();

    let enroll = |model: &TypistModel| {
        let (stream, _) = generate_stream(model, None).unwrap();
        let (observations, _) =
            extract_bigram_observations(&stream, &AnalysisConfig::default());
        let summary = compute_bigram_stats(&observations);
        Profile::from_stats(&model.participant_id, &summary.per_bigram, 30)
    };
    let profiles = [enroll(&model_a), enroll(&model_b)];

    // Same laws as A, different event noise.
    let mut session_model = model_a.clone();
    session_model.seed = 999;
    session_model.participant_id = "mystery".to_string();
    let (stream, _) = generate_stream(&session_model, None).unwrap();
    let (observations, _) = extract_bigram_observations(&stream, &AnalysisConfig::default());
    let session = compute_bigram_stats(&observations);

    let result = match_profile(&session.per_bigram, &profiles, 5).unwrap();
    assert_eq!(result.best, model_a.participant_id);
    let rho_of = |id: &str| {
        result
            .scores
            .iter()
            .find(|s| s.participant_id == id)
            .map(|s| s.rho)
            .unwrap()
    };
    assert!(rho_of(&model_a.participant_id) > 0.9);
    assert!(rho_of(&model_a.participant_id) > rho_of(&model_b.participant_id) + 0.3);
}

fn day(i: u64) -> chrono::NaiveDate {
    chrono::NaiveDate::from_ymd_opt(2020, 1, 1)
        .unwrap()
        .checked_add_days(chrono::Days::new(i))
        .unwrap()
}

proptest! {
    #[test]
    fn consistency_matrix_is_symmetric_with_unit_diagonal(
        table in proptest::collection::vec(
            proptest::collection::vec(1u32..=500, 6..12),
            2..8,
        ),
    ) {
        // Build one ranking per day over a shared bigram set.
        let mut rankings: BTreeMap<chrono::NaiveDate, DailyRanking> = BTreeMap::new();
        for (i, means) in table.iter().enumerate() {
            let values: Vec<f64> = means.iter().map(|m| f64::from(*m)).collect();
            let ranks = fractional_ranks(&values).unwrap();
            let ranking: DailyRanking = ranks
                .iter()
                .enumerate()
                .map(|(j, r)| (Bigram::from_index(j).unwrap(), *r))
                .collect();
            rankings.insert(day(i as u64), ranking);
        }
        let config = AnalysisConfig::default();
        let matrix = consistency_matrix(&rankings, &config).unwrap();

        let n = matrix.days.len();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(matrix.get(i, j), matrix.get(j, i));
            }
            if let Some(d) = matrix.get(i, i) {
                prop_assert_eq!(d, 1.0);
            }
        }

        // Relabelling the days permutes rows but leaves the average alone.
        let relabelled: BTreeMap<chrono::NaiveDate, DailyRanking> = rankings
            .values()
            .rev()
            .enumerate()
            .map(|(i, r)| (day(100 + i as u64), r.clone()))
            .collect();
        let permuted = consistency_matrix(&relabelled, &config).unwrap();
        match (matrix.average, permuted.average) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12),
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn match_profile_scores_survive_positive_affine_session_transforms(
        means in proptest::collection::hash_set(50i64..2000, 6..30),
        other in proptest::collection::vec(50i64..2000, 6..30),
        scale_pct in 10u32..400,
        shift in -20i64..200,
    ) {
        let means: Vec<i64> = means.into_iter().collect();
        let session: BTreeMap<Bigram, BigramStats> = means
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let bigram = Bigram::from_index(i).unwrap();
                (bigram, BigramStats {
                    bigram,
                    count: 5,
                    mean_ms: *m as f64,
                    std_ms: None,
                    min_ms: 1,
                    max_ms: 2000,
                })
            })
            .collect();
        let profile_a = Profile {
            participant_id: "a".to_string(),
            bigram_means: session.values().map(|s| (s.bigram, s.mean_ms)).collect(),
        };
        let profile_b = Profile {
            participant_id: "b".to_string(),
            bigram_means: other
                .iter()
                .enumerate()
                .map(|(i, m)| (Bigram::from_index(i).unwrap(), *m as f64))
                .collect(),
        };
        let profiles = [profile_a, profile_b];
        let baseline = match_profile(&session, &profiles, 5).unwrap();

        let scale = f64::from(scale_pct) / 100.0;
        let transformed: BTreeMap<Bigram, BigramStats> = session
            .iter()
            .map(|(bigram, s)| {
                let mut s = s.clone();
                s.mean_ms = scale * s.mean_ms + shift as f64;
                (*bigram, s)
            })
            .collect();
        let shifted = match_profile(&transformed, &profiles, 5).unwrap();

        prop_assert_eq!(&baseline.best, &shifted.best);
        for (x, y) in baseline.scores.iter().zip(&shifted.scores) {
            prop_assert_eq!(&x.participant_id, &y.participant_id);
            prop_assert_eq!(x.rho, y.rho);
        }
    }
}
