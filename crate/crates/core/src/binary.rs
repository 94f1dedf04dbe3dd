//! Binary decision vectors and the count-of-ones restriction.

use std::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DpcdError, Result};

/// The generator used everywhere randomness is needed.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator for `seed`; stream 0 is
/// [`seeded_rng`].
pub fn stream_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream assignments, so that components sharing one seed stay independent.
pub(crate) mod streams {
    pub const NEIGHBORHOOD: u64 = 1;
    pub const RANDOM_SEARCH: u64 = 2;
    pub const PLANTED_GRAPH: u64 = 3;
    pub const CLUSTERS: u64 = 4;
    pub const GAUSSIAN: u64 = 5;
}

/// Sign with `sign(0) = +1`. Every module routes its sign decisions through here.
pub fn sign(v: f64) -> Result<i8> {
    if !v.is_finite() {
        return Err(DpcdError::NonFinite(format!("sign({v})")));
    }
    Ok(if v >= 0.0 { 1 } else { -1 })
}

/// A point of `{-1, +1}^n`, `n >= 1`.
///
/// Matrix-valued variables (`n x r` codes) are stored row-major: entry
/// `(i, j)` lives at index `i * r + j`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct BinaryVector(Vec<i8>);

impl BinaryVector {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if values.is_empty() {
            return Err(DpcdError::domain("binary vector must have length >= 1"));
        }
        if let Some(pos) = values.iter().position(|&v| v != 1 && v != -1) {
            return Err(DpcdError::domain(format!(
                "entry {pos} is {}, expected -1 or +1",
                values[pos]
            )));
        }
        Ok(BinaryVector(values))
    }

    pub fn filled(n: usize, value: i8) -> Result<Self> {
        BinaryVector::new(vec![value; n])
    }

    /// Elementwise sign of a real vector.
    pub fn from_signs(values: &[f64]) -> Result<Self> {
        let v = values.iter().map(|&x| sign(x)).collect::<Result<Vec<_>>>()?;
        BinaryVector::new(v)
    }

    /// Indicator of `selected` as a +-1 vector (selected = +1).
    pub fn from_support(n: usize, selected: &[usize]) -> Result<Self> {
        let mut v = vec![-1i8; n];
        for &i in selected {
            if i >= n {
                return Err(DpcdError::domain(format!("index {i} out of range for n = {n}")));
            }
            v[i] = 1;
        }
        BinaryVector::new(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&v| v as f64).collect()
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn flip_all(&mut self, indices: &[usize]) {
        for &i in indices {
            self.flip(i);
        }
    }

    pub fn negated(&self) -> Self {
        BinaryVector(self.0.iter().map(|&v| -v).collect())
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&v| v == 1).count()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().map(|&v| v as i64).sum()
    }

    /// Indices holding +1, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, &v)| (v == 1).then_some(i))
            .collect()
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BinaryVector(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *v == 1 { "+" } else { "-" })?;
        }
        f.write_str(")")
    }
}

impl TryFrom<Vec<i8>> for BinaryVector {
    type Error = DpcdError;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        BinaryVector::new(v)
    }
}

impl From<BinaryVector> for Vec<i8> {
    fn from(v: BinaryVector) -> Self {
        v.0
    }
}

pub fn hamming_distance(y: &BinaryVector, z: &BinaryVector) -> Result<usize> {
    if y.len() != z.len() {
        return Err(DpcdError::Dimension {
            expected: y.len(),
            found: z.len(),
        });
    }
    Ok(y.0.iter().zip(&z.0).filter(|(a, b)| a != b).count())
}

/// Feasible set of the problem: all of `{-1,+1}^n`, or the slice with
/// exactly `r` entries equal to +1 (`1^T x = 2r - n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Constraint {
    Unconstrained,
    ExactOnes(usize),
}

impl Constraint {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Constraint::ExactOnes(r) if r > n => Err(DpcdError::domain(format!(
                "ExactOnes({r}) is infeasible for n = {n}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn is_constrained(&self) -> bool {
        matches!(self, Constraint::ExactOnes(_))
    }

    /// Number of feasible points, as a float since it overflows quickly.
    pub fn feasible_count(&self, n: usize) -> f64 {
        match *self {
            Constraint::Unconstrained => 2f64.powi(n as i32),
            Constraint::ExactOnes(r) => binomial(n, r),
        }
    }
}

pub fn constraint_check(x: &BinaryVector, c: Constraint) -> Result<bool> {
    c.validate(x.len())?;
    Ok(match c {
        Constraint::Unconstrained => true,
        Constraint::ExactOnes(r) => x.sum() == 2 * r as i64 - x.len() as i64,
    })
}

pub fn random_feasible(n: usize, c: Constraint, seed: u64) -> Result<BinaryVector> {
    random_feasible_with(n, c, &mut seeded_rng(seed))
}

pub fn random_feasible_with<R: Rng + ?Sized>(
    n: usize,
    c: Constraint,
    rng: &mut R,
) -> Result<BinaryVector> {
    if n == 0 {
        return Err(DpcdError::domain("n must be >= 1"));
    }
    c.validate(n)?;
    match c {
        Constraint::Unconstrained => {
            BinaryVector::new((0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect())
        }
        Constraint::ExactOnes(r) => {
            let chosen = index::sample(rng, n, r).into_vec();
            BinaryVector::from_support(n, &chosen)
        }
    }
}

/// `C(n, k)` in floating point.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
