mod common;

use approx::assert_relative_eq;
use nalgebra::{UnitQuaternion, Vector3};
use proptest::prelude::*;

use corsmal_eval::baselines::{average_baseline, fill_missing_tasks, random_baseline};
use corsmal_eval::dataset::{
    build_density_table, interpolate_pose, load_annotations, load_pose_track, load_predictions,
    write_annotations, write_pose_track, write_predictions, FillingLevel, FillingType, Keyframe,
    Pose, PoseTrack, PredictionRecord, PredictionSet, Split,
};
use corsmal_eval::scoring::{overall_score, task_score, weighted_f1, Measure, MeasurePair};
use corsmal_eval::simulator::{object_safety, SimParams};

fn level() -> impl Strategy<Value = Option<FillingLevel>> {
    prop::option::of(prop::sample::select(FillingLevel::ALL.to_vec()))
}

fn kind() -> impl Strategy<Value = Option<FillingType>> {
    prop::option::of(prop::sample::select(FillingType::ALL.to_vec()))
}

fn positive() -> impl Strategy<Value = Option<f64>> {
    prop::option::of(0.01f64..5000.0)
}

fn record(id: String) -> impl Strategy<Value = PredictionRecord> {
    (
        level(),
        kind(),
        positive(),
        positive(),
        positive(),
        positive(),
        positive(),
    )
        .prop_map(move |(l, k, c, m, wt, wb, h)| PredictionRecord {
            config_id: id.clone(),
            filling_level: l,
            filling_type: k,
            capacity: c,
            container_mass: m,
            width_top: wt,
            width_bottom: wb,
            height: h,
        })
}

fn prediction_set(n: usize) -> impl Strategy<Value = PredictionSet> {
    (0..n)
        .map(|i| record(format!("cfg-{i:02}")))
        .collect::<Vec<_>>()
        .prop_map(|records| PredictionSet::new("sample", records))
}

fn rotation() -> impl Strategy<Value = UnitQuaternion<f64>> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
        .prop_map(|(r, p, y)| UnitQuaternion::from_euler_angles(r, p, y))
}

fn track() -> impl Strategy<Value = PoseTrack> {
    prop::collection::vec(
        (
            1u64..30,
            -1000.0f64..1000.0,
            -1000.0f64..1000.0,
            -1000.0f64..1000.0,
            rotation(),
        ),
        1..12,
    )
    .prop_map(|steps| {
        let mut frame = 0;
        let keyframes = steps
            .into_iter()
            .map(|(gap, x, y, z, q)| {
                frame += gap;
                Keyframe {
                    frame,
                    pose: Pose {
                        translation: Vector3::new(x, y, z),
                        rotation: q,
                    },
                }
            })
            .collect();
        PoseTrack::new(keyframes).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prediction_files_round_trip(set in prediction_set(12)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sample.csv");
        write_predictions(&path, &set).unwrap();
        let ids: Vec<String> = set.records.iter().map(|r| r.config_id.clone()).collect();
        let back = load_predictions(&path, &ids).unwrap();
        prop_assert_eq!(back, set);
    }

    #[test]
    fn pose_tracks_round_trip(t in track()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("track.csv");
        write_pose_track(&path, &t).unwrap();
        prop_assert_eq!(load_pose_track(&path).unwrap(), t);
    }

    #[test]
    fn interpolation_hits_keyframes_and_stays_between(t in track(), frac in 0.0f64..1.0) {
        for kf in t.keyframes() {
            prop_assert_eq!(interpolate_pose(&t, kf.frame).unwrap(), kf.pose);
        }
        for pair in t.keyframes().windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let frame = a.frame + ((b.frame - a.frame) as f64 * frac) as u64;
            let p = interpolate_pose(&t, frame).unwrap();
            // on the segment joining the two translations
            let span = (b.pose.translation - a.pose.translation).norm();
            let split = (p.translation - a.pose.translation).norm() + (b.pose.translation - p.translation).norm();
            prop_assert!((split - span).abs() <= 1e-6 * (1.0 + span));
            // rotation no farther from either end than the ends are apart
            let gap = a.pose.rotation.angle_to(&b.pose.rotation);
            prop_assert!(a.pose.rotation.angle_to(&p.rotation) <= gap + 1e-9);
            prop_assert!(b.pose.rotation.angle_to(&p.rotation) <= gap + 1e-9);
        }
        let last = t.keyframes().last().unwrap();
        prop_assert_eq!(interpolate_pose(&t, last.frame + 100).unwrap(), last.pose);
    }

    #[test]
    fn interpolation_is_continuous(t in track()) {
        for pair in t.keyframes().windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let frames = b.frame - a.frame;
            let span = (b.pose.translation - a.pose.translation).norm();
            let turn = a.pose.rotation.angle_to(&b.pose.rotation);
            for f in a.frame..b.frame {
                let p = interpolate_pose(&t, f).unwrap();
                let q = interpolate_pose(&t, f + 1).unwrap();
                prop_assert!((q.translation - p.translation).norm() <= span / frames as f64 + 1e-6);
                prop_assert!(p.rotation.angle_to(&q.rotation) <= turn / frames as f64 + 1e-6);
            }
        }
    }

    #[test]
    fn regression_scores_fall_away_from_truth(truth in 1.0f64..1000.0, d1 in 0.0f64..2.0, d2 in 0.0f64..2.0) {
        let (near, far) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        for measure in Measure::ALL {
            for sign in [1.0, -1.0] {
                let a = (truth * (1.0 + sign * near)).max(1e-6);
                let b = (truth * (1.0 + sign * far)).max(1e-6);
                let (_, ca) = measure.contribution(a, truth).unwrap();
                let (_, cb) = measure.contribution(b, truth).unwrap();
                prop_assert!(ca >= cb, "{measure}: {ca} < {cb}");
                prop_assert!((0.0..=1.0).contains(&ca));
            }
        }
    }

    #[test]
    fn weighted_f1_ignores_order(
        pairs in prop::collection::vec((prop::option::of(0usize..6), 0usize..5), 1..40),
        seed in any::<u64>(),
    ) {
        let (preds, truths): (Vec<_>, Vec<_>) = pairs.iter().copied().unzip();
        let (base, _) = weighted_f1(&preds, &truths, 5).unwrap();
        let mut shuffled = pairs.clone();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut rng);
        let (p2, t2): (Vec<_>, Vec<_>) = shuffled.into_iter().unzip();
        let (again, _) = weighted_f1(&p2, &t2, 5).unwrap();
        prop_assert_eq!(base.to_bits(), again.to_bits());
        prop_assert!((0.0..=1.0).contains(&base));
    }

    #[test]
    fn task_score_ignores_order(values in prop::collection::vec((prop::option::of(1.0f64..500.0), 1.0f64..500.0), 1..30)) {
        let ids: Vec<String> = (0..values.len()).map(|i| i.to_string()).collect();
        let pairs: Vec<MeasurePair> = values
            .iter()
            .zip(&ids)
            .map(|(&(estimate, truth), id)| MeasurePair { config_id: id, estimate, truth })
            .collect();
        let mut reversed = pairs.clone();
        reversed.reverse();
        let (a, _) = task_score(Measure::Capacity, &pairs).unwrap();
        let (b, _) = task_score(Measure::Capacity, &reversed).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-12);
    }

    #[test]
    fn dropping_an_estimate_zeroes_its_term(values in prop::collection::vec((1.0f64..500.0, 1.0f64..500.0), 1..30), pick in any::<prop::sample::Index>()) {
        let ids: Vec<String> = (0..values.len()).map(|i| i.to_string()).collect();
        let mut pairs: Vec<MeasurePair> = values
            .iter()
            .zip(&ids)
            .map(|(&(e, truth), id)| MeasurePair { config_id: id, estimate: Some(e), truth })
            .collect();
        let (full, _) = task_score(Measure::Height, &pairs).unwrap();
        let i = pick.index(pairs.len());
        pairs[i].estimate = None;
        let (partial, per) = task_score(Measure::Height, &pairs).unwrap();
        prop_assert_eq!(per[i].indicator, 0);
        prop_assert_eq!(per[i].contribution, 0.0);
        prop_assert!(partial <= full + 1e-12);
        prop_assert_eq!(per.len(), pairs.len());
    }

    #[test]
    fn overall_score_is_monotone_and_bounded(
        scores in prop::array::uniform10(0.0f64..=1.0),
        bump in 0usize..10,
        n in 0usize..=5,
    ) {
        let s = overall_score(&scores, n);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&s));
        let mut better = scores;
        better[bump] = 1.0;
        prop_assert!(overall_score(&better, n) >= s - 1e-15);
    }

    #[test]
    fn density_table_ignores_row_order(seed in any::<u64>()) {
        let mut train: Vec<_> = common::annotations().into_iter().filter(|a| a.split == Split::Train).collect();
        let base = build_density_table(&train).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(train.as_mut_slice(), &mut rng);
        prop_assert_eq!(build_density_table(&train).unwrap(), base);
    }

    #[test]
    fn filling_is_idempotent_and_keeps_addressed_tasks(set in prediction_set(10), seed in any::<u64>()) {
        let train: Vec<_> = common::annotations().into_iter().filter(|a| a.split == Split::Train).collect();
        let ids: Vec<String> = set.records.iter().map(|r| r.config_id.clone()).collect();
        for filler in [random_baseline(&ids, &train, seed), average_baseline(&ids, &train)] {
            let once = fill_missing_tasks(&set, &filler);
            let twice = fill_missing_tasks(&once, &filler);
            prop_assert_eq!(&once, &twice);
            prop_assert_eq!(&once.tasks_addressed, &set.tasks_addressed);
            for (before, after) in set.records.iter().zip(&once.records) {
                for task in &set.tasks_addressed {
                    match task {
                        corsmal_eval::dataset::Task::T1 => prop_assert_eq!(before.filling_level, after.filling_level),
                        corsmal_eval::dataset::Task::T2 => prop_assert_eq!(before.filling_type, after.filling_type),
                        corsmal_eval::dataset::Task::T3 => prop_assert_eq!(before.capacity, after.capacity),
                        corsmal_eval::dataset::Task::T4 => prop_assert_eq!(before.container_mass, after.container_mass),
                        corsmal_eval::dataset::Task::T5 => prop_assert_eq!(
                            (before.width_top, before.width_bottom, before.height),
                            (after.width_top, after.width_bottom, after.height)
                        ),
                    }
                }
            }
        }
    }

    #[test]
    fn safety_depends_only_on_the_force_ratio(applied in 0.0f64..50.0, required in 0.01f64..50.0, k in 0.01f64..100.0) {
        let c = SimParams::default().safety_sensitivity;
        let a = object_safety(applied, required, c).unwrap();
        let b = object_safety(applied * k, required * k, c).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-9, max_relative = 1e-9);
        prop_assert!((0.0..=1.0).contains(&a));
    }
}

#[test]
fn annotation_file_round_trips() {
    let anns = common::annotations();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("copy.csv");
    write_annotations(&path, &anns).unwrap();
    assert_eq!(load_annotations(&path).unwrap(), anns);
}

#[test]
fn baselines_are_seed_deterministic() {
    let anns = common::annotations();
    let train: Vec<_> = anns
        .iter()
        .filter(|a| a.split == Split::Train)
        .cloned()
        .collect();
    let ids: Vec<String> = anns.iter().map(|a| a.config_id.clone()).collect();
    assert_eq!(
        random_baseline(&ids, &train, 5),
        random_baseline(&ids, &train, 5)
    );
    assert_ne!(
        random_baseline(&ids, &train, 5).records,
        random_baseline(&ids, &train, 6).records
    );
}
