use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{DatasetEntry, DatasetManifest, Provenance, Source};
use crate::seed;
use crate::{Error, Result};

/// Training/testing compositions. Test images are always real.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    RealOnly,
    HalfRealHalfSim,
    FiveXMoreSim,
    SimOnly,
    Custom {
        real_train: usize,
        sim_train: usize,
        real_test: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PresetCounts {
    pub real_train: usize,
    pub sim_train: usize,
    pub real_test: usize,
}

impl PresetCounts {
    pub fn train(&self) -> usize {
        self.real_train + self.sim_train
    }
}

const TEST_IMAGES: usize = 124;

impl Preset {
    pub const STANDARD: [Preset; 4] = [
        Preset::RealOnly,
        Preset::HalfRealHalfSim,
        Preset::FiveXMoreSim,
        Preset::SimOnly,
    ];

    pub fn counts(&self) -> PresetCounts {
        let (real_train, sim_train, real_test) = match *self {
            Preset::RealOnly => (700, 0, TEST_IMAGES),
            Preset::HalfRealHalfSim => (350, 350, TEST_IMAGES),
            Preset::FiveXMoreSim => (700, 3500, TEST_IMAGES),
            Preset::SimOnly => (0, 700, TEST_IMAGES),
            Preset::Custom {
                real_train,
                sim_train,
                real_test,
            } => (real_train, sim_train, real_test),
        };
        PresetCounts {
            real_train,
            sim_train,
            real_test,
        }
    }

    /// Row label used in result tables.
    pub fn label(&self) -> String {
        match self {
            Preset::RealOnly => "Real only".into(),
            Preset::HalfRealHalfSim => "Half real half sim".into(),
            Preset::FiveXMoreSim => "5x more sim".into(),
            Preset::SimOnly => "Sim only".into(),
            Preset::Custom {
                real_train,
                sim_train,
                real_test,
            } => format!("Custom {real_train}r+{sim_train}s/{real_test}"),
        }
    }

    /// Command-line name.
    pub fn cli_name(&self) -> String {
        match self {
            Preset::RealOnly => "real-only".into(),
            Preset::HalfRealHalfSim => "half-half".into(),
            Preset::FiveXMoreSim => "5x-sim".into(),
            Preset::SimOnly => "sim-only".into(),
            Preset::Custom {
                real_train,
                sim_train,
                real_test,
            } => format!("custom:{real_train},{sim_train},{real_test}"),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cli_name())
    }
}

impl FromStr for Preset {
    type Err = String;

    /// `real-only`, `half-half`, `5x-sim`, `sim-only` or
    /// `custom:REAL_TRAIN,SIM_TRAIN,REAL_TEST`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "real-only" => Ok(Preset::RealOnly),
            "half-half" => Ok(Preset::HalfRealHalfSim),
            "5x-sim" => Ok(Preset::FiveXMoreSim),
            "sim-only" => Ok(Preset::SimOnly),
            _ => {
                let spec = s
                    .strip_prefix("custom:")
                    .ok_or_else(|| format!("unknown preset {s:?}"))?;
                let nums: Vec<usize> = spec
                    .split(',')
                    .map(|n| {
                        n.trim()
                            .parse()
                            .map_err(|_| format!("bad count {n:?} in {s:?}"))
                    })
                    .collect::<std::result::Result<_, _>>()?;
                match nums[..] {
                    [real_train, sim_train, real_test] => Ok(Preset::Custom {
                        real_train,
                        sim_train,
                        real_test,
                    }),
                    _ => Err(format!("custom preset needs three counts, got {s:?}")),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixSpec {
    pub preset: Preset,
    /// Seeds the training draws.
    pub seed: u64,
    /// Draw the test set per preset instead of sharing one draw per
    /// repetition across all presets.
    pub independent_test: bool,
}

impl MixSpec {
    pub fn new(preset: Preset, seed: u64) -> Self {
        MixSpec {
            preset,
            seed,
            independent_test: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub repetitions: usize,
    /// Seeds the per-repetition test draws.
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            repetitions: 2,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub repetition: usize,
    pub train: DatasetManifest,
    pub test: DatasetManifest,
}

fn pool(manifest: &DatasetManifest, source: Source) -> Vec<DatasetEntry> {
    let resolved = manifest.with_resolved_paths();
    let mut entries: Vec<DatasetEntry> = resolved
        .entries
        .into_iter()
        .filter(|e| e.source == source)
        .collect();
    // independent of manifest ordering
    entries.sort_by(|a, b| a.image_id.cmp(&b.image_id));
    entries
}

fn preset_key(p: &Preset) -> u64 {
    let c = p.counts();
    seed::derive_named(
        seed::derive(
            seed::derive(c.real_train as u64, c.sim_train as u64),
            c.real_test as u64,
        ),
        "preset",
    )
}

/// Shuffle-split repetitions of one preset.
///
/// Repetition `r` draws its real test set with a seed derived from
/// `(split.seed, r)`, so by default every preset mixed with the same split
/// spec is scored on the same test images. Training images are drawn from
/// the remaining real pool and the simulated pool with seeds derived from
/// `(spec.seed, r, preset)`.
pub fn mix(
    real: &DatasetManifest,
    sim: &DatasetManifest,
    spec: &MixSpec,
    split: &SplitSpec,
) -> Result<Vec<Split>> {
    if split.repetitions == 0 {
        return Err(Error::InvalidConfig(
            "repetitions must be at least 1".into(),
        ));
    }
    let counts = spec.preset.counts();
    let real_pool = pool(real, Source::Real);
    let sim_pool = pool(sim, Source::Sim);
    let real_needed = counts.real_train + counts.real_test;
    if real_pool.len() < real_needed {
        return Err(Error::Capacity {
            pool: "real",
            required: real_needed,
            available: real_pool.len(),
        });
    }
    if sim_pool.len() < counts.sim_train {
        return Err(Error::Capacity {
            pool: "sim",
            required: counts.sim_train,
            available: sim_pool.len(),
        });
    }

    // Only pools that actually contribute to one training set can collide.
    if counts.real_train > 0 && counts.sim_train > 0 {
        let real_ids: BTreeSet<&str> = real_pool.iter().map(|e| e.image_id.as_str()).collect();
        let shared: Vec<String> = sim_pool
            .iter()
            .filter(|e| real_ids.contains(e.image_id.as_str()))
            .map(|e| e.image_id.clone())
            .collect();
        if !shared.is_empty() {
            return Err(Error::SharedImageIds(shared));
        }
    }

    let key = preset_key(&spec.preset);
    let mut splits = Vec::with_capacity(split.repetitions);
    for r in 0..split.repetitions {
        let test_seed = if spec.independent_test {
            seed::derive(seed::derive(split.seed, r as u64), key)
        } else {
            seed::derive(split.seed, r as u64)
        };
        let train_seed = seed::derive(seed::derive(spec.seed, r as u64), key);

        let mut real_idx: Vec<usize> = (0..real_pool.len()).collect();
        real_idx.shuffle(&mut seed::rng(seed::derive_named(test_seed, "test")));
        let (test_idx, rest) = real_idx.split_at(counts.real_test);
        let mut rest = rest.to_vec();
        rest.sort_unstable();
        rest.shuffle(&mut seed::rng(seed::derive_named(train_seed, "train-real")));

        let mut sim_idx: Vec<usize> = (0..sim_pool.len()).collect();
        sim_idx.shuffle(&mut seed::rng(seed::derive_named(train_seed, "train-sim")));

        let mut train: Vec<DatasetEntry> = rest[..counts.real_train]
            .iter()
            .map(|&i| real_pool[i].clone())
            .chain(
                sim_idx[..counts.sim_train]
                    .iter()
                    .map(|&i| sim_pool[i].clone()),
            )
            .collect();
        let mut test: Vec<DatasetEntry> = test_idx.iter().map(|&i| real_pool[i].clone()).collect();
        train.sort_by(|a, b| (a.source, &a.image_id).cmp(&(b.source, &b.image_id)));
        test.sort_by(|a, b| a.image_id.cmp(&b.image_id));

        let provenance = |role: &str| Provenance::Mixed {
            preset: spec.preset.cli_name(),
            mix_seed: spec.seed,
            split_seed: split.seed,
            repetition: r,
            role: role.into(),
            real: Box::new(real.provenance.clone()),
            sim: Box::new(sim.provenance.clone()),
        };
        let train = DatasetManifest::new(provenance("train"), train);
        let test = DatasetManifest::new(provenance("test"), test);
        train.validate()?;
        splits.push(Split {
            repetition: r,
            train,
            test,
        });
    }
    Ok(splits)
}
