use std::fs;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use conedist::classify::{
    build_cone, classify_one, evaluate_protocol, load_dataset, synthetic_dataset, write_dataset,
    ClassData, Dataset, ProtocolOptions, SyntheticSpec,
};
use conedist::{NormKind, SolverConfig};

fn opts(ks: Vec<usize>, seed: u64) -> ProtocolOptions {
    ProtocolOptions {
        ks,
        trials: 1,
        r: NormKind::L2,
        seed,
        solver: SolverConfig::default(),
        timing: false,
    }
}

fn small_spec() -> SyntheticSpec {
    SyntheticSpec {
        classes: 3,
        dim: 6,
        objects: 3,
        features: 4,
        noise: 0.3,
    }
}

#[test]
fn build_cone_examples() {
    let ray = build_cone(&[vec![1.0, 0.0, 0.0]]).unwrap();
    assert_eq!(ray.generators(), &[vec![1.0, 0.0, 0.0]]);
    let ray = build_cone(&[vec![1.0, 0.0], vec![2.0, 0.0], vec![0.0, 0.0]]).unwrap();
    assert_eq!(ray.num_generators(), 1);
    assert!(build_cone(&[vec![0.0, 0.0]]).is_err());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let feats: Vec<Vec<f64>> = (0..41)
        .map(|_| (0..8).map(|_| rng.random_range(0.0..1.0)).collect())
        .collect();
    assert!(build_cone(&feats).unwrap().num_generators() <= 41);
}

#[test]
fn classify_one_examples() {
    let cfg = SolverConfig::default();
    let a = build_cone(&[vec![1.0, 0.1, 0.0], vec![1.0, 0.0, 0.1]]).unwrap();
    let b = build_cone(&[vec![0.0, 1.0, 0.1], vec![0.1, 1.0, 0.0]]).unwrap();
    let (idx, d) = classify_one(&b, std::slice::from_ref(&a), NormKind::L2, &cfg).unwrap();
    assert_eq!((idx, d.len()), (0, 1));
    let (idx, d) = classify_one(&b, &[a.clone(), b.clone()], NormKind::L1, &cfg).unwrap();
    assert_eq!(idx, 1);
    assert_eq!(d[1], 0.0);
    // Ties go to the first class.
    let (idx, _) = classify_one(&a, &[b.clone(), b], NormKind::Inf, &cfg).unwrap();
    assert_eq!(idx, 0);
    assert!(classify_one(&a, &[], NormKind::L2, &cfg).is_err());
}

#[test]
fn separated_classes_are_perfect() {
    let ds = Dataset::new(vec![
        ClassData {
            label: "x".into(),
            objects: vec![
                vec![vec![1.0, 0.1]],
                vec![vec![1.0, 0.2]],
                vec![vec![1.0, 0.15]],
            ],
        },
        ClassData {
            label: "y".into(),
            objects: vec![
                vec![vec![0.1, 1.0]],
                vec![vec![0.2, 1.0]],
                vec![vec![0.15, 1.0]],
            ],
        },
    ])
    .unwrap();
    let rep = evaluate_protocol(&ds, &opts(vec![2], 0)).unwrap();
    assert_eq!(rep.per_k[0].accuracy, 1.0);
    assert_eq!(rep.per_k[0].confusion, vec![vec![3, 0], vec![0, 3]]);
}

#[test]
fn identical_classes_give_chance_accuracy() {
    let obj = vec![vec![1.0, 0.5, 0.0], vec![0.2, 1.0, 0.3]];
    let class = |label: &str| ClassData {
        label: label.into(),
        objects: vec![obj.clone(); 3],
    };
    let ds = Dataset::new(vec![class("a"), class("b"), class("c")]).unwrap();
    let rep = evaluate_protocol(&ds, &opts(vec![1, 2], 3)).unwrap();
    for k in &rep.per_k {
        assert!((k.accuracy - 1.0 / 3.0).abs() < 1e-12);
        assert!(k.predictions.iter().all(|p| p.predicted == 0));
        let total: usize = k.confusion.iter().flatten().sum();
        let trace: usize = (0..3).map(|i| k.confusion[i][i]).sum();
        assert_eq!(k.accuracy, trace as f64 / total as f64);
    }
}

#[test]
fn protocol_input_checks() {
    let ds = synthetic_dataset(&small_spec(), 0).unwrap();
    assert!(evaluate_protocol(&ds, &opts(vec![3], 0)).is_err());
    assert!(evaluate_protocol(&ds, &opts(vec![0], 0)).is_err());
    assert!(evaluate_protocol(&ds, &opts(vec![], 0)).is_err());
    let single = vec![ClassData {
        label: "only".into(),
        objects: vec![vec![vec![1.0]]],
    }];
    assert!(Dataset::new(single).is_err());
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let ds = synthetic_dataset(&small_spec(), 5).unwrap();
    let o = opts(vec![1, 2], 9);
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| evaluate_protocol(&ds, &o).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| evaluate_protocol(&ds, &o).unwrap());
    assert_eq!(
        serde_json::to_string(&one).unwrap(),
        serde_json::to_string(&many).unwrap()
    );
    assert_eq!(one.accuracy_csv(), many.accuracy_csv());
}

#[test]
fn zero_distance_predicts_that_class() {
    let ds = synthetic_dataset(&small_spec(), 6).unwrap();
    let rep = evaluate_protocol(&ds, &opts(vec![1, 2], 1)).unwrap();
    for k in &rep.per_k {
        for p in &k.predictions {
            if let Some(c) = p.distances.iter().position(|&d| d == 0.0) {
                assert_eq!(p.predicted, c);
            }
        }
    }
}

#[test]
fn manifest_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let ds = synthetic_dataset(&small_spec(), 2).unwrap();
    let manifest = write_dataset(&ds, dir.path()).unwrap();
    let back = load_dataset(&manifest).unwrap();
    assert_eq!(back.labels(), ds.labels());
    assert_eq!(back.dim(), ds.dim());
    for (a, b) in back.classes().iter().zip(ds.classes()) {
        assert_eq!(a.objects, b.objects);
    }

    // Same data with one feature vector per row.
    let obj = dir.path().join("rows.csv");
    fs::write(&obj, "1,0,0\n0,1,0\n").unwrap();
    let other = dir.path().join("rows2.csv");
    fs::write(&other, "0,0,1\n").unwrap();
    let m = dir.path().join("rows.json");
    fs::write(
        &m,
        r#"{"orientation": "rows", "classes": [
            {"label": "a", "objects": ["rows.csv"]},
            {"label": "b", "objects": ["rows2.csv"]}]}"#,
    )
    .unwrap();
    let ds = load_dataset(&m).unwrap();
    assert_eq!(
        ds.classes()[0].objects[0],
        vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]
    );

    fs::write(&m, r#"{"classes": [{"label": "a", "objects": ["missing.csv"]}, {"label": "b", "objects": ["rows2.csv"]}]}"#)
        .unwrap();
    let err = load_dataset(&m).unwrap_err().to_string();
    assert!(err.contains("missing.csv"), "{err}");
}

#[test]
fn accuracy_table_layout() {
    let ds = synthetic_dataset(&small_spec(), 7).unwrap();
    let rep = evaluate_protocol(&ds, &opts(vec![1, 2], 2)).unwrap();
    let csv = rep.accuracy_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,class0,class1,class2,overall");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,"));
}
