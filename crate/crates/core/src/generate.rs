//! Seeded instance generators: small random instances for property checks
//! and corpus instances shaped like the standard multi-mode benchmark sets.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Activity, Instance, Mode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSpec {
    pub max_activities: usize,
    pub max_modes: usize,
    pub max_renewables: usize,
    pub max_nonrenewables: usize,
    pub max_duration: i64,
    /// Probability (in percent) of an arc `i -> j` for `i < j`.
    pub arc_percent: u32,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            max_activities: 7,
            max_modes: 3,
            max_renewables: 2,
            max_nonrenewables: 2,
            max_duration: 5,
            arc_percent: 25,
        }
    }
}

/// A small random instance. Durations are at least 1 and the non-renewable
/// budgets always admit the all-first-modes vector.
pub fn random_instance(seed: u64, spec: &RandomSpec) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rng.gen_range(1..=spec.max_activities);
    let nr = rng.gen_range(0..=spec.max_renewables);
    let nn = rng.gen_range(0..=spec.max_nonrenewables);
    let caps: Vec<i64> = (0..nr).map(|_| rng.gen_range(1..=4)).collect();
    let mut activities = Vec::with_capacity(a);
    for _ in 0..a {
        let modes = rng.gen_range(1..=spec.max_modes);
        let list = (0..modes)
            .map(|_| {
                Mode::new(
                    rng.gen_range(1..=spec.max_duration),
                    caps.iter().map(|&c| rng.gen_range(0..=c)).collect(),
                    (0..nn).map(|_| rng.gen_range(0..=4)).collect(),
                )
            })
            .collect();
        activities.push(Activity { modes: list });
    }
    let ncaps: Vec<i64> = (0..nn)
        .map(|k| {
            // mode 1 everywhere stays affordable and no single mode is over budget
            let reference: i64 = activities.iter().map(|act| act.modes[0].nonrenewable[k]).sum();
            let single = activities.iter().flat_map(|act| act.modes.iter().map(|m| m.nonrenewable[k])).max().unwrap();
            let most: i64 = activities.iter().map(|act| act.modes.iter().map(|m| m.nonrenewable[k]).max().unwrap()).sum();
            let base = reference.max(single);
            rng.gen_range(base..=base.max(most))
        })
        .collect();
    let mut precedence = Vec::new();
    for i in 0..a {
        for j in i + 1..a {
            if rng.gen_ratio(spec.arc_percent, 100) {
                precedence.push((i, j));
            }
        }
    }
    Instance::new(activities, caps, ncaps, precedence).expect("generated instances are well formed")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorpusShape {
    /// 15 activities, 3 modes, 2 renewable and 2 non-renewable resources.
    C15,
    /// 20 activities, 3 modes.
    J20,
    /// 16 activities, 2 modes.
    M2,
}

impl CorpusShape {
    pub const ALL: [CorpusShape; 3] = [CorpusShape::C15, CorpusShape::J20, CorpusShape::M2];

    pub fn name(self) -> &'static str {
        match self {
            CorpusShape::C15 => "c15",
            CorpusShape::J20 => "j20",
            CorpusShape::M2 => "m2",
        }
    }

    pub fn activities(self) -> usize {
        match self {
            CorpusShape::C15 => 15,
            CorpusShape::J20 => 20,
            CorpusShape::M2 => 16,
        }
    }

    pub fn modes(self) -> usize {
        match self {
            CorpusShape::C15 | CorpusShape::J20 => 3,
            CorpusShape::M2 => 2,
        }
    }
}

impl FromStr for CorpusShape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "c15" => Ok(CorpusShape::C15),
            "j20" => Ok(CorpusShape::J20),
            "m2" => Ok(CorpusShape::M2),
            other => Err(format!("unknown corpus shape {other:?}")),
        }
    }
}

/// A benchmark-shaped instance: network where every non-initial activity
/// has one to three predecessors, durations 1..=10, demands 1..=10 with a
/// trade-off between duration and demand across modes.
pub fn corpus_instance(shape: CorpusShape, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (shape.activities() as u64) << 32);
    let a = shape.activities();
    let modes = shape.modes();
    let mut activities = Vec::with_capacity(a);
    for _ in 0..a {
        let mut durations: Vec<i64> = (0..modes).map(|_| rng.gen_range(1..=10)).collect();
        durations.sort_unstable();
        let list = durations
            .iter()
            .map(|&p| {
                // one renewable and one non-renewable requested, as in the generated sets
                let mut b = vec![0; 2];
                let mut w = vec![0; 2];
                b[rng.gen_range(0..2)] = rng.gen_range(1..=10).max(11 - p).min(10);
                w[rng.gen_range(0..2)] = rng.gen_range(1..=10).max(11 - p).min(10);
                Mode::new(p, b, w)
            })
            .collect();
        activities.push(Activity { modes: list });
    }
    let mut precedence = Vec::new();
    let starters = (a / 5).max(1);
    for j in starters..a {
        let mut preds: Vec<usize> = (0..j).collect();
        preds.shuffle(&mut rng);
        let count = rng.gen_range(1..=3).min(j);
        for &i in &preds[..count] {
            precedence.push((i, j));
        }
    }
    precedence.sort_unstable();
    let caps: Vec<i64> = (0..2)
        .map(|k| {
            let peak = activities.iter().flat_map(|act| act.modes.iter().map(|m| m.renewable[k])).max().unwrap();
            peak.max(1) + rng.gen_range(0..=peak)
        })
        .collect();
    let ncaps: Vec<i64> = (0..2)
        .map(|k| {
            let least: i64 = activities.iter().map(|act| act.modes.iter().map(|m| m.nonrenewable[k]).min().unwrap()).sum();
            let most: i64 = activities.iter().map(|act| act.modes.iter().map(|m| m.nonrenewable[k]).max().unwrap()).sum();
            let single = activities.iter().flat_map(|act| act.modes.iter().map(|m| m.nonrenewable[k])).max().unwrap();
            (least + (most - least) / 2).max(single)
        })
        .collect();
    Instance::new(activities, caps, ncaps, precedence).expect("corpus instances are well formed")
}
