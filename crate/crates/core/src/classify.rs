//! Nearest-cone classification of feature sets.
//!
//! Every object is a set of feature vectors; a cone is the conic hull of
//! those vectors. A test object is assigned to the class whose training cone
//! is nearest in `Dis_r`. The evaluation protocol holds out one object per
//! class (rotating over objects) and trains each class on `k` of its
//! remaining objects, drawn by a seeded permutation so that the draw for
//! `k + 1` extends the draw for `k`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angles::{SolverConfig, Status};
use crate::cones::PolyhedralCone;
use crate::distance::{dis_polyhedral, NormKind};
use crate::error::{ConeError, Result};
use crate::io;

/// Feature vectors of one object.
pub type Object = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassData {
    pub label: String,
    pub objects: Vec<Object>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    classes: Vec<ClassData>,
    dim: usize,
}

impl Dataset {
    pub fn new(classes: Vec<ClassData>) -> Result<Self> {
        if classes.len() < 2 {
            return Err(ConeError::InvalidInput(format!(
                "need at least 2 classes, got {}",
                classes.len()
            )));
        }
        let mut dim = None;
        for c in &classes {
            if c.objects.is_empty() {
                return Err(ConeError::InvalidInput(format!(
                    "class {:?} has no objects",
                    c.label
                )));
            }
            for (i, obj) in c.objects.iter().enumerate() {
                if obj.is_empty() {
                    return Err(ConeError::InvalidInput(format!(
                        "object {i} of class {:?} has no features",
                        c.label
                    )));
                }
                for f in obj {
                    match dim {
                        None => dim = Some(f.len()),
                        Some(d) if d != f.len() => {
                            return Err(ConeError::DimensionMismatch {
                                expected: d,
                                found: f.len(),
                            })
                        }
                        _ => {}
                    }
                }
            }
        }
        let dim = dim.unwrap_or(0);
        if dim == 0 {
            return Err(ConeError::InvalidInput("features of dimension 0".into()));
        }
        Ok(Self { classes, dim })
    }

    pub fn classes(&self) -> &[ClassData] {
        &self.classes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.label.clone()).collect()
    }
}

/// Cone spanned by a set of feature vectors; zero vectors are dropped.
pub fn build_cone(features: &[Vec<f64>]) -> Result<PolyhedralCone> {
    PolyhedralCone::from_nonzero(features.to_vec())
}

/// Index of the nearest trained cone (first one on ties) and all distances.
pub fn classify_one(
    test: &PolyhedralCone,
    trained: &[PolyhedralCone],
    r: NormKind,
    cfg: &SolverConfig,
) -> Result<(usize, Vec<f64>)> {
    if trained.is_empty() {
        return Err(ConeError::InvalidInput("no trained classes".into()));
    }
    let dists: Vec<f64> = trained
        .par_iter()
        .map(|c| dis_polyhedral(test, c, r, cfg).map(|d| d.value))
        .collect::<Result<_>>()?;
    Ok((argmin(&dists), dists))
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolOptions {
    /// Training objects per class, one report each.
    pub ks: Vec<usize>,
    /// Independent repetitions with different draws.
    pub trials: usize,
    pub r: NormKind,
    pub seed: u64,
    pub solver: SolverConfig,
    /// Record wall-clock time per distance evaluation.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub trial: usize,
    pub rotation: usize,
    pub true_class: usize,
    pub predicted: usize,
    pub distances: Vec<f64>,
    /// Angle computations that stopped without converging.
    pub unconverged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KReport {
    pub k: usize,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    pub accuracy: f64,
    pub per_class_accuracy: Vec<f64>,
    pub predictions: Vec<Prediction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierReport {
    pub labels: Vec<String>,
    pub r: NormKind,
    pub seed: u64,
    pub trials: usize,
    pub rotations: usize,
    pub per_k: Vec<KReport>,
    /// Seconds per distance evaluation (two angles), in evaluation order; only when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pair_seconds: Option<Vec<f64>>,
}

struct Job {
    trial: usize,
    rotation: usize,
    k_index: usize,
    test_class: usize,
    train_class: usize,
}

/// Runs the rotating hold-out protocol.
pub fn evaluate_protocol(ds: &Dataset, opts: &ProtocolOptions) -> Result<ClassifierReport> {
    opts.solver.validate()?;
    if opts.ks.is_empty() || opts.trials == 0 {
        return Err(ConeError::InvalidInput(
            "need at least one k and one trial".into(),
        ));
    }
    let nclass = ds.classes.len();
    let min_objects = ds
        .classes
        .iter()
        .map(|c| c.objects.len())
        .min()
        .unwrap_or(0);
    let kmax = *opts.ks.iter().max().expect("nonempty");
    if opts.ks.contains(&0) {
        return Err(ConeError::InvalidInput("k must be at least 1".into()));
    }
    if min_objects < kmax + 1 {
        return Err(ConeError::InvalidInput(format!(
            "k = {kmax} needs {} objects per class, smallest class has {min_objects}",
            kmax + 1
        )));
    }
    let rotations = min_objects;

    // Draw order of training objects per (trial, rotation, class).
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut draws = vec![vec![Vec::new(); rotations]; opts.trials];
    for trial_draws in draws.iter_mut() {
        for (rot, rot_draws) in trial_draws.iter_mut().enumerate() {
            *rot_draws = ds
                .classes
                .iter()
                .map(|c| {
                    let mut rest: Vec<usize> = (0..c.objects.len()).filter(|&i| i != rot).collect();
                    rest.shuffle(&mut rng);
                    rest
                })
                .collect::<Vec<Vec<usize>>>();
        }
    }

    let test_cones: Vec<Vec<PolyhedralCone>> = (0..rotations)
        .map(|rot| {
            ds.classes
                .iter()
                .map(|c| build_cone(&c.objects[rot]))
                .collect()
        })
        .collect::<Result<_>>()?;
    let train_cone = |trial: usize, rot: usize, k: usize, class: usize| -> Result<PolyhedralCone> {
        let c = &ds.classes[class];
        let feats: Vec<Vec<f64>> = draws[trial][rot][class][..k]
            .iter()
            .flat_map(|&o| c.objects[o].iter().cloned())
            .collect();
        build_cone(&feats)
    };
    let mut train_cones = Vec::new();
    for trial in 0..opts.trials {
        for rot in 0..rotations {
            for &k in &opts.ks {
                let cones: Vec<PolyhedralCone> = (0..nclass)
                    .map(|c| train_cone(trial, rot, k, c))
                    .collect::<Result<_>>()?;
                train_cones.push(cones);
            }
        }
    }
    let train_at = |trial: usize, rot: usize, ki: usize| {
        &train_cones[(trial * rotations + rot) * opts.ks.len() + ki]
    };

    let mut jobs = Vec::new();
    for trial in 0..opts.trials {
        for rotation in 0..rotations {
            for k_index in 0..opts.ks.len() {
                for test_class in 0..nclass {
                    for train_class in 0..nclass {
                        jobs.push(Job {
                            trial,
                            rotation,
                            k_index,
                            test_class,
                            train_class,
                        });
                    }
                }
            }
        }
    }
    let results: Vec<(f64, usize, f64)> = jobs
        .par_iter()
        .map(|j| {
            let start = std::time::Instant::now();
            let d = dis_polyhedral(
                &test_cones[j.rotation][j.test_class],
                &train_at(j.trial, j.rotation, j.k_index)[j.train_class],
                opts.r,
                &opts.solver,
            )?;
            let unconverged = [&d.theta_pq, &d.theta_qp]
                .iter()
                .filter(|a| a.status != Status::Converged)
                .count();
            Ok((d.value, unconverged, start.elapsed().as_secs_f64()))
        })
        .collect::<Result<_>>()?;

    let mut per_k: Vec<KReport> = opts
        .ks
        .iter()
        .map(|&k| KReport {
            k,
            confusion: vec![vec![0; nclass]; nclass],
            accuracy: 0.0,
            per_class_accuracy: vec![0.0; nclass],
            predictions: Vec::new(),
        })
        .collect();
    for (chunk_jobs, chunk) in jobs.chunks(nclass).zip(results.chunks(nclass)) {
        let j = &chunk_jobs[0];
        let distances: Vec<f64> = chunk.iter().map(|c| c.0).collect();
        let predicted = argmin(&distances);
        let rep = &mut per_k[j.k_index];
        rep.confusion[j.test_class][predicted] += 1;
        rep.predictions.push(Prediction {
            trial: j.trial,
            rotation: j.rotation,
            true_class: j.test_class,
            predicted,
            distances,
            unconverged: chunk.iter().map(|c| c.1).sum(),
        });
    }
    for rep in &mut per_k {
        let total: usize = rep.confusion.iter().flatten().sum();
        let correct: usize = (0..nclass).map(|c| rep.confusion[c][c]).sum();
        rep.accuracy = correct as f64 / total as f64;
        rep.per_class_accuracy = rep
            .confusion
            .iter()
            .enumerate()
            .map(|(c, row)| row[c] as f64 / row.iter().sum::<usize>() as f64)
            .collect();
    }
    Ok(ClassifierReport {
        labels: ds.labels(),
        r: opts.r,
        seed: opts.seed,
        trials: opts.trials,
        rotations,
        per_k,
        pair_seconds: opts.timing.then(|| results.iter().map(|r| r.2).collect()),
    })
}

impl ClassifierReport {
    /// Accuracy table: one row per `k`, one column per class, then the overall accuracy.
    pub fn accuracy_csv(&self) -> String {
        let mut out = String::from("k");
        for l in &self.labels {
            out.push(',');
            out.push_str(&csv_field(l));
        }
        out.push_str(",overall\n");
        for rep in &self.per_k {
            let _ = write!(out, "{}", rep.k);
            for a in &rep.per_class_accuracy {
                let _ = write!(out, ",{a:.6}");
            }
            let _ = writeln!(out, ",{:.6}", rep.accuracy);
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// How feature vectors are laid out in an object file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// One feature vector per row.
    Rows,
    /// One feature vector per column.
    #[default]
    Cols,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestClass {
    pub label: String,
    /// Object files, relative to the manifest's directory.
    pub objects: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub classes: Vec<ManifestClass>,
    #[serde(default)]
    pub orientation: Orientation,
}

fn read_object(path: &Path, orientation: Orientation) -> Result<Object> {
    let rows = io::read_csv_rows(path)?;
    if rows.is_empty() {
        return Err(ConeError::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "no feature data".into(),
        });
    }
    Ok(match orientation {
        Orientation::Rows => rows,
        Orientation::Cols => (0..rows[0].len())
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect(),
    })
}

/// Loads a dataset described by a JSON manifest.
pub fn load_dataset(manifest_path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(manifest_path).map_err(|e| ConeError::Io {
        path: manifest_path.to_path_buf(),
        message: e.to_string(),
    })?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| ConeError::Parse {
        path: manifest_path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let classes = manifest
        .classes
        .iter()
        .map(|c| {
            let objects = c
                .objects
                .iter()
                .map(|o| read_object(&base.join(o), manifest.orientation))
                .collect::<Result<_>>()?;
            Ok(ClassData {
                label: c.label.clone(),
                objects,
            })
        })
        .collect::<Result<_>>()?;
    Dataset::new(classes)
}

/// Writes one CSV per object (features as columns) and `manifest.json` into `dir`.
pub fn write_dataset(ds: &Dataset, dir: &Path) -> Result<PathBuf> {
    let io_err = |path: &Path, e: std::io::Error| ConeError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut classes = Vec::new();
    for (ci, c) in ds.classes.iter().enumerate() {
        let mut objects = Vec::new();
        for (oi, obj) in c.objects.iter().enumerate() {
            let name = format!("class{ci}_obj{oi}.csv");
            let rows: Vec<Vec<f64>> = (0..ds.dim)
                .map(|i| obj.iter().map(|f| f[i]).collect())
                .collect();
            io::write_rows(&dir.join(&name), &rows)?;
            objects.push(name);
        }
        classes.push(ManifestClass {
            label: c.label.clone(),
            objects,
        });
    }
    let manifest = Manifest {
        classes,
        orientation: Orientation::Cols,
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text + "\n").map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// Shape of a synthetic benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub classes: usize,
    pub dim: usize,
    pub objects: usize,
    pub features: usize,
    /// Standard deviation of the per-feature noise.
    pub noise: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            classes: 4,
            dim: 16,
            objects: 5,
            features: 20,
            noise: 0.5,
        }
    }
}

/// Nonnegative Gaussian clusters: class `c` has its mean on its own block of
/// coordinates and features are `max(0, mean + noise)`.
pub fn synthetic_dataset(spec: &SyntheticSpec, seed: u64) -> Result<Dataset> {
    if spec.classes < 2 || spec.dim < spec.classes || spec.objects == 0 || spec.features == 0 {
        return Err(ConeError::InvalidInput(
            "invalid synthetic dataset shape".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block = spec.dim / spec.classes;
    let classes = (0..spec.classes)
        .map(|c| {
            let mean: Vec<f64> = (0..spec.dim)
                .map(|i| {
                    if i / block == c && i < block * spec.classes {
                        rng.random_range(1.0..3.0)
                    } else {
                        0.0
                    }
                })
                .collect();
            let objects = (0..spec.objects)
                .map(|_| {
                    (0..spec.features)
                        .map(|_| {
                            mean.iter()
                                .map(|m| {
                                    let z: f64 = StandardNormal.sample(&mut rng);
                                    (m + spec.noise * z).max(0.0)
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            ClassData {
                label: format!("class{c}"),
                objects,
            }
        })
        .collect();
    Dataset::new(classes)
}
