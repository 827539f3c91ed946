//! Guess which slots emitted, solve for the seed digits those guesses force,
//! then finish the remaining digits by constrained forward simulation.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::linear::{solve_mod10, LinearSystemMod10};
use crate::error::{Error, Result};
use crate::keys::KeyMap;
use crate::prg::{generate_into, key_array, max_skip, render_digits, Generator};

pub const DEFAULT_MASK_BUDGET: f64 = 1e7;

/// Per-mask solving cost quoted for the seed-length-10 projection.
pub const SOLVE_COST: f64 = 1e3;

/// Bound the projection is compared with.
pub const THEOREM_BOUND: f64 = 1e15;

/// Seed index read at each running-sum update, in order.
pub fn slot_schedule(generator: Generator, n: usize) -> Result<Vec<usize>> {
    let last_skip = match generator {
        Generator::Prg1 => max_skip(n),
        Generator::SinglePass => 0,
        Generator::Prg2 => {
            return Err(Error::Config("the second generator leaks its seed; no slot guessing needed".into()))
        }
    };
    Ok((0..=last_skip)
        .flat_map(|skip| (0..n).filter(move |&k| skip == 0 || (k / skip) % 2 == 1))
        .collect())
}

/// Which slots emitted a digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GuessMask {
    pub bits: u64,
    pub slots: usize,
}

impl GuessMask {
    pub fn emitted(&self, slot: usize) -> bool {
        self.bits >> slot & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GuessSolveReport {
    pub n: usize,
    pub slots: usize,
    /// Twice the output length: the slot count a half-emission estimate assumes.
    pub nominal_slots: usize,
    pub masks_considered: u64,
    pub masks_solved: u64,
    pub masks_consistent: u64,
    pub equations: u64,
    pub simulation_steps: u64,
    pub candidates: Vec<String>,
    pub verified: bool,
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Work estimate: every mask with the right weight, times the per-mask solve cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projection {
    pub n: usize,
    pub slots: usize,
    pub masks: f64,
    pub solve_cost: f64,
    pub total: f64,
    pub bound: f64,
    pub within_bound: bool,
}

pub fn project_cost(generator: Generator, n: usize) -> Result<Projection> {
    let slots = slot_schedule(generator, n)?.len();
    let masks = 2f64.powi(slots as i32);
    let total = masks * SOLVE_COST;
    Ok(Projection { n, slots, masks, solve_cost: SOLVE_COST, total, bound: THEOREM_BOUND, within_bound: total <= THEOREM_BOUND })
}

struct Search<'a> {
    schedule: &'a [usize],
    key: [u8; 10],
    target: &'a [u8],
    n: usize,
}

impl Search<'_> {
    /// Forward simulation constrained by the mask; seeds that complete are pushed to `out`.
    fn walk(&self, mask: GuessMask, seed: &mut [Option<u8>], slot: usize, sum: u8, emitted: usize, sink: &mut Sink) {
        if slot == self.schedule.len() {
            sink.seeds.push(seed.iter().map(|d| d.expect("every digit is read")).collect());
            return;
        }
        let idx = self.schedule[slot];
        let base = self.key[sum as usize];
        let fixed = seed[idx].is_some();
        let choices = match seed[idx] {
            Some(d) => d..d + 1,
            None => 0..5,
        };
        for d in choices {
            sink.steps += 1;
            let next = (base + d) % 10;
            let ok = if mask.emitted(slot) { self.target[emitted] == next } else { next >= 5 };
            if !ok {
                continue;
            }
            if !fixed {
                seed[idx] = Some(d);
            }
            self.walk(mask, seed, slot + 1, next, emitted + mask.emitted(slot) as usize, sink);
            if !fixed {
                seed[idx] = None;
            }
        }
    }

    /// Equations come from consecutive emitted slots, where the previous sum is observed.
    fn equations(&self, mask: GuessMask) -> LinearSystemMod10 {
        let mut sys = LinearSystemMod10::new(self.n);
        let mut k = 0;
        for t in 0..self.schedule.len() {
            if mask.emitted(t) {
                if t > 0 && mask.emitted(t - 1) {
                    let prev = self.target[k - 1];
                    let rhs = (self.target[k] + 10 - self.key[prev as usize]) % 10;
                    sys.push_unit(self.schedule[t], rhs).expect("index within seed");
                }
                k += 1;
            }
        }
        sys
    }

    fn solve_mask(&self, mask: GuessMask, stats: &mut MaskStats) -> Vec<Vec<u8>> {
        let sys = self.equations(mask);
        stats.equations += sys.equations() as u64;
        let solution = solve_mod10(&sys);
        if !solution.is_consistent() {
            return Vec::new();
        }
        let mut seed = vec![None; self.n];
        for (i, slot) in seed.iter_mut().enumerate() {
            if let Some(v) = solution.forced(i) {
                if v >= 5 {
                    return Vec::new();
                }
                *slot = Some(v);
            }
        }
        stats.consistent += 1;
        let mut sink = Sink { seeds: Vec::new(), steps: 0 };
        // the first pass starts from the raw last seed digit
        let last = self.n - 1;
        let carries: Vec<u8> = match seed[last] {
            Some(c) => vec![c],
            None => (0..5).collect(),
        };
        for c in carries {
            let was = seed[last];
            seed[last] = Some(c);
            self.walk(mask, &mut seed, 0, c, 0, &mut sink);
            seed[last] = was;
        }
        stats.steps += sink.steps;
        sink.seeds
    }
}

struct Sink {
    seeds: Vec<Vec<u8>>,
    steps: u64,
}

#[derive(Default)]
struct MaskStats {
    solved: u64,
    consistent: u64,
    equations: u64,
    steps: u64,
}

/// All seeds over `{0..4}^n` whose output under the known `key` is `target`.
pub fn guess_and_solve(target: &[u8], n: usize, key: &KeyMap, generator: Generator, budget: f64) -> Result<GuessSolveReport> {
    if n < 2 {
        return Err(Error::Config(format!("seed length {n} too short")));
    }
    let schedule = slot_schedule(generator, n)?;
    let slots = schedule.len();
    let masks = 2f64.powi(slots as i32);
    if slots > 63 || masks > budget {
        return Err(Error::Budget { required: masks, budget });
    }
    let key_digits = key_array(key);
    let search = Search { schedule: &schedule, key: key_digits, target, n };
    let want = target.len();
    let valid_target = want <= slots && target.iter().all(|&d| d < 5);
    let (found, stats) = if valid_target {
        (0..1u64 << slots)
            .into_par_iter()
            .filter(|bits| bits.count_ones() as usize == want)
            .fold(
                || (Vec::new(), MaskStats::default()),
                |(mut found, mut stats), bits| {
                    stats.solved += 1;
                    found.extend(search.solve_mask(GuessMask { bits, slots }, &mut stats));
                    (found, stats)
                },
            )
            .reduce(
                || (Vec::new(), MaskStats::default()),
                |(mut fa, a), (fb, b)| {
                    fa.extend(fb);
                    (fa, MaskStats {
                        solved: a.solved + b.solved,
                        consistent: a.consistent + b.consistent,
                        equations: a.equations + b.equations,
                        steps: a.steps + b.steps,
                    })
                },
            )
    } else {
        (Vec::new(), MaskStats::default())
    };
    let mut buf = Vec::new();
    let mut verified = true;
    let candidates: BTreeSet<Vec<u8>> = found.into_iter().collect();
    for seed in &candidates {
        generate_into(generator, seed, &key_digits, &mut buf);
        verified &= buf == target;
    }
    Ok(GuessSolveReport {
        n,
        slots,
        nominal_slots: 2 * target.len(),
        masks_considered: 1 << slots,
        masks_solved: stats.solved,
        masks_consistent: stats.consistent,
        equations: stats.equations,
        simulation_steps: stats.steps,
        candidates: candidates.iter().map(|s| render_digits(s)).collect(),
        verified,
    })
}

/// The attack without the key: repeat it for every map in `family`.
pub fn guess_and_solve_unknown_key(
    target: &[u8],
    n: usize,
    family: &[KeyMap],
    generator: Generator,
    budget: f64,
) -> Result<Vec<(KeyMap, GuessSolveReport)>> {
    let per_key = 2f64.powi(slot_schedule(generator, n)?.len() as i32);
    if per_key * family.len() as f64 > budget {
        return Err(Error::Budget { required: per_key * family.len() as f64, budget });
    }
    family
        .iter()
        .map(|key| guess_and_solve(target, n, key, generator, budget).map(|r| (key.clone(), r)))
        .filter(|r| r.as_ref().map_or(true, |(_, rep)| !rep.candidates.is_empty()))
        .collect()
}

/// The hundred maps `i -> (a*i + b) mod 10`.
pub fn affine_family() -> Vec<KeyMap> {
    (0..10).flat_map(|a| (0..10).map(move |b| KeyMap::affine_digits(a, b))).collect()
}

/// Number of masks with exactly `emitted` set bits among `slots`.
pub fn weighted_masks(slots: usize, emitted: usize) -> u64 {
    binomial(slots, emitted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prg::{parse_digits, Seed};

    #[test]
    fn schedules() {
        let s = slot_schedule(Generator::Prg1, 8).unwrap();
        assert_eq!(s.len(), Generator::Prg1.slot_count(8));
        assert_eq!(&s[8..12], &[1, 3, 5, 7]);
        assert_eq!(slot_schedule(Generator::Prg1, 6).unwrap().len(), 14);
        assert!(slot_schedule(Generator::Prg2, 6).is_err());
    }

    #[test]
    fn recovers_seed() {
        let key = KeyMap::affine_digits(3, 0);
        let seed = Seed::parse("314104").unwrap();
        let y = Generator::Prg1.generate(&seed, &key).unwrap();
        let rep = guess_and_solve(&y, 6, &key, Generator::Prg1, DEFAULT_MASK_BUDGET).unwrap();
        assert!(rep.candidates.contains(&"314104".to_string()));
        assert!(rep.verified);
        assert_eq!(rep.slots, 14);
    }

    #[test]
    fn impossible_targets() {
        let key = KeyMap::affine_digits(3, 0);
        let rep = guess_and_solve(&parse_digits("9").unwrap(), 6, &key, Generator::Prg1, 1e7).unwrap();
        assert!(rep.candidates.is_empty());
        assert!(matches!(guess_and_solve(&[0], 12, &key, Generator::Prg1, 1e7), Err(Error::Budget { .. })));
    }

    #[test]
    fn projection_at_ten() {
        let p = project_cost(Generator::Prg1, 10).unwrap();
        assert_eq!(p.slots, 10 + 5 + 4 + 4 + 4 + 5);
        assert!(p.within_bound);
    }

    #[test]
    fn unknown_key_finds_true_pair() {
        let key = KeyMap::affine_digits(7, 2);
        let seed = Seed::parse("0421").unwrap();
        let y = Generator::Prg1.generate(&seed, &key).unwrap();
        let hits = guess_and_solve_unknown_key(&y, 4, &affine_family(), Generator::Prg1, 1e7).unwrap();
        assert!(hits.iter().any(|(k, r)| *k == key && r.candidates.contains(&"0421".to_string())));
        assert_eq!(weighted_masks(14, 7), 3432);
    }
}
