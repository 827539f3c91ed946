//! Linear systems over Z10, solved through their Z2 and Z5 components.

use serde::Serialize;

use crate::error::{Error, Result};

/// Equations `sum_j a_ij x_j = b_i (mod 10)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct LinearSystemMod10 {
    vars: usize,
    rows: Vec<(Vec<u8>, u8)>,
}

impl LinearSystemMod10 {
    pub fn new(vars: usize) -> LinearSystemMod10 {
        LinearSystemMod10 { vars, rows: Vec::new() }
    }

    pub fn push(&mut self, coeffs: Vec<u8>, rhs: u8) -> Result<()> {
        if coeffs.len() != self.vars {
            return Err(Error::Dimension { expected: self.vars, found: coeffs.len() });
        }
        self.rows.push((coeffs.into_iter().map(|a| a % 10).collect(), rhs % 10));
        Ok(())
    }

    /// Adds `x_var = rhs`.
    pub fn push_unit(&mut self, var: usize, rhs: u8) -> Result<()> {
        let mut coeffs = vec![0; self.vars];
        *coeffs.get_mut(var).ok_or(Error::Dimension { expected: self.vars, found: var + 1 })? = 1;
        self.push(coeffs, rhs)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn equations(&self) -> usize {
        self.rows.len()
    }

    pub fn is_satisfied_by(&self, x: &[u8]) -> bool {
        x.len() == self.vars
            && self.rows.iter().all(|(a, b)| {
                a.iter().zip(x).map(|(&ai, &xi)| ai as u32 * xi as u32).sum::<u32>() % 10 == *b as u32
            })
    }
}

/// Solutions over a prime field: a particular solution plus a null-space basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineSpace {
    pub modulus: u8,
    pub particular: Vec<u8>,
    pub basis: Vec<Vec<u8>>,
}

fn inverse_mod(a: u8, p: u8) -> u8 {
    (1..p).find(|&x| (a as u32 * x as u32) % p as u32 == 1).expect("nonzero element of a prime field")
}

/// Gauss-Jordan elimination over Z_p; `None` when inconsistent.
fn solve_prime(vars: usize, rows: &[(Vec<u8>, u8)], p: u8) -> Option<AffineSpace> {
    let pw = p as u32;
    let mut m: Vec<Vec<u32>> = rows
        .iter()
        .map(|(a, b)| a.iter().map(|&x| x as u32 % pw).chain(std::iter::once(*b as u32 % pw)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..vars {
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let inv = inverse_mod(m[r][c] as u8, p) as u32;
        m[r].iter_mut().for_each(|v| *v = *v * inv % pw);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                row.iter_mut().zip(&pivot).for_each(|(v, &p)| *v = (*v + pw * pw - f * p) % pw);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| row[vars] != 0) {
        return None;
    }
    let mut particular = vec![0u8; vars];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][vars] as u8;
    }
    let basis = (0..vars)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u8; vars];
            v[free] = 1;
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = ((pw - m[i][free]) % pw) as u8;
            }
            v
        })
        .collect();
    Some(AffineSpace { modulus: p, particular, basis })
}

impl AffineSpace {
    pub fn count(&self) -> u128 {
        (self.modulus as u128).pow(self.basis.len() as u32)
    }

    fn point(&self, mut index: u128) -> Vec<u8> {
        let p = self.modulus as u32;
        let mut x: Vec<u32> = self.particular.iter().map(|&v| v as u32).collect();
        for b in &self.basis {
            let t = (index % p as u128) as u32;
            index /= p as u128;
            x.iter_mut().zip(b).for_each(|(xi, &bi)| *xi = (*xi + t * bi as u32) % p);
        }
        x.into_iter().map(|v| v as u8).collect()
    }
}

/// Exact solution set of a system over Z10.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SolutionSet {
    Inconsistent,
    Solutions { mod2: AffineSpace, mod5: AffineSpace },
}

/// Recombines residues: the unique `x mod 10` with `x = a (mod 2)`, `x = b (mod 5)`.
pub fn crt10(a: u8, b: u8) -> u8 {
    ((5 * a as u32 + 6 * b as u32) % 10) as u8
}

impl SolutionSet {
    pub fn is_consistent(&self) -> bool {
        matches!(self, SolutionSet::Solutions { .. })
    }

    pub fn count(&self) -> u128 {
        match self {
            SolutionSet::Inconsistent => 0,
            SolutionSet::Solutions { mod2, mod5 } => mod2.count() * mod5.count(),
        }
    }

    /// Value of `var` when it is the same in every solution.
    pub fn forced(&self, var: usize) -> Option<u8> {
        let SolutionSet::Solutions { mod2, mod5 } = self else { return None };
        let fixed = |s: &AffineSpace| s.basis.iter().all(|b| b[var] == 0).then_some(s.particular[var]);
        Some(crt10(fixed(mod2)?, fixed(mod5)?))
    }

    pub fn contains(&self, x: &[u8]) -> bool {
        let SolutionSet::Solutions { mod2, mod5 } = self else { return false };
        let member = |s: &AffineSpace| {
            let p = s.modulus as u32;
            // x - particular must lie in the span; brute force is fine for small dimension
            (0..s.count()).any(|i| s.point(i).iter().zip(x).all(|(&a, &b)| a as u32 == b as u32 % p))
        };
        x.len() == mod2.particular.len() && member(mod2) && member(mod5)
    }

    /// All solutions, mod-2 index varying fastest.
    pub fn iter(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        let (n2, n5) = match self {
            SolutionSet::Inconsistent => (0, 0),
            SolutionSet::Solutions { mod2, mod5 } => (mod2.count(), mod5.count()),
        };
        (0..n2 * n5).map(move |i| {
            let SolutionSet::Solutions { mod2, mod5 } = self else { unreachable!() };
            let a = mod2.point(i % n2);
            let b = mod5.point(i / n2);
            a.iter().zip(&b).map(|(&x, &y)| crt10(x, y)).collect()
        })
    }
}

pub fn solve_mod10(system: &LinearSystemMod10) -> SolutionSet {
    match (solve_prime(system.vars, &system.rows, 2), solve_prime(system.vars, &system.rows, 5)) {
        (Some(mod2), Some(mod5)) => SolutionSet::Solutions { mod2, mod5 },
        _ => SolutionSet::Inconsistent,
    }
}
