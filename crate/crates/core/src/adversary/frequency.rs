//! Chi-square tests of digit and within-string bigram frequencies against
//! uniform over `{0..4}`.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 30;
pub const SIGNIFICANCE: f64 = 0.01;
const SYMBOLS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    /// True when either test rejects uniformity (or a digit falls outside `0..5`).
    pub reject: bool,
    pub digits: ChiSquare,
    pub bigrams: Option<ChiSquare>,
    pub out_of_range: u64,
    pub steps: u64,
    pub budget: f64,
}

fn chi_square(counts: &[u64]) -> Option<ChiSquare> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return None;
    }
    let expected = total as f64 / counts.len() as f64;
    let statistic = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dof = counts.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    Some(ChiSquare { statistic, dof, p_value: dist.sf(statistic) })
}

pub fn frequency_distinguisher(samples: &[Vec<u8>], budget: f64) -> Result<FrequencyReport> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::SampleSize { required: MIN_SAMPLES, found: samples.len() });
    }
    let steps: u64 = samples.iter().map(|s| (2 * s.len()).saturating_sub(1) as u64).sum();
    if steps as f64 > budget {
        return Err(Error::Budget { required: steps as f64, budget });
    }
    let mut digits = [0u64; SYMBOLS];
    let mut bigrams = [0u64; SYMBOLS * SYMBOLS];
    let mut out_of_range = 0;
    for s in samples {
        for &d in s {
            match digits.get_mut(d as usize) {
                Some(c) => *c += 1,
                None => out_of_range += 1,
            }
        }
        for w in s.windows(2) {
            if w[0] < SYMBOLS as u8 && w[1] < SYMBOLS as u8 {
                bigrams[w[0] as usize * SYMBOLS + w[1] as usize] += 1;
            }
        }
    }
    let digit_test = chi_square(&digits).ok_or(Error::Empty("samples"))?;
    let bigram_test = chi_square(&bigrams);
    let reject = out_of_range > 0
        || digit_test.p_value < SIGNIFICANCE
        || bigram_test.as_ref().is_some_and(|t| t.p_value < SIGNIFICANCE);
    Ok(FrequencyReport { reject, digits: digit_test, bigrams: bigram_test, out_of_range, steps, budget })
}
