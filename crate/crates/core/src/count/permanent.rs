//! Exact permanents of square nonnegative matrices.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_RYSER_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub enum Entries {
    Integer(Vec<Vec<BigUint>>),
    Float(Vec<Vec<f64>>),
}

/// Weighted bipartite graph on `X = rows`, `Y = columns`; a zero entry is a
/// missing edge.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteWeighted {
    entries: Entries,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PermanentValue {
    Exact(BigUint),
    Float(f64),
}

impl PermanentValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            PermanentValue::Exact(v) => v.to_f64().unwrap_or(f64::INFINITY),
            PermanentValue::Float(v) => *v,
        }
    }
}

impl BipartiteWeighted {
    pub fn integer(rows: Vec<Vec<BigUint>>) -> Result<Self> {
        check_square(rows.iter().map(Vec::len), rows.len())?;
        Ok(BipartiteWeighted {
            entries: Entries::Integer(rows),
        })
    }

    pub fn float(rows: Vec<Vec<f64>>) -> Result<Self> {
        check_square(rows.iter().map(Vec::len), rows.len())?;
        if rows.iter().flatten().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "permanent weights must be finite and nonnegative".into(),
            ));
        }
        Ok(BipartiteWeighted {
            entries: Entries::Float(rows),
        })
    }

    /// 0/1 biadjacency matrix.
    pub fn from_biadjacency(rows: &[Vec<bool>]) -> Result<Self> {
        Self::integer(
            rows.iter()
                .map(|r| r.iter().map(|&b| BigUint::from(b as u8)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        match &self.entries {
            Entries::Integer(r) => r.len(),
            Entries::Float(r) => r.len(),
        }
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn float_rows(&self) -> Vec<Vec<f64>> {
        match &self.entries {
            Entries::Float(r) => r.clone(),
            Entries::Integer(r) => r
                .iter()
                .map(|row| row.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect())
                .collect(),
        }
    }
}

fn check_square(lens: impl Iterator<Item = usize>, n: usize) -> Result<()> {
    for (i, l) in lens.enumerate() {
        if l != n {
            return Err(Error::InvalidArgument(format!(
                "row {i} has {l} entries in a {n}x{n} matrix"
            )));
        }
    }
    Ok(())
}

/// Ryser's inclusion-exclusion formula with Gray-code column updates,
/// `O(2^m m)` arithmetic operations. Integer inputs are evaluated exactly.
pub fn ryser_permanent(b: &BipartiteWeighted, cap: usize) -> Result<PermanentValue> {
    let m = b.dim();
    if m > cap {
        return Err(Error::DimensionOverCap { dim: m, cap });
    }
    if m == 0 {
        return Ok(match b.entries {
            Entries::Integer(_) => PermanentValue::Exact(BigUint::from(1u8)),
            Entries::Float(_) => PermanentValue::Float(1.0),
        });
    }
    match &b.entries {
        Entries::Float(rows) => Ok(PermanentValue::Float(ryser_f64(rows))),
        Entries::Integer(rows) => {
            let small: Option<Vec<Vec<i128>>> = rows
                .iter()
                .map(|r| r.iter().map(|x| x.to_i128()).collect())
                .collect();
            let v = small
                .and_then(|s| ryser_i128(&s))
                .map(BigInt::from)
                .unwrap_or_else(|| ryser_big(rows));
            let (sign, mag) = v.into_parts();
            debug_assert!(sign != Sign::Minus);
            Ok(PermanentValue::Exact(mag))
        }
    }
}

/// Gray-code subset walk shared by the three arithmetic variants: calls
/// `step(j, added, odd_complement)` after flipping column `j`.
fn gray_walk(m: usize, mut step: impl FnMut(usize, bool, bool)) {
    let mut in_set = vec![false; m];
    for k in 1u64..(1u64 << m) {
        let j = k.trailing_zeros() as usize;
        in_set[j] = !in_set[j];
        let size = (k ^ (k >> 1)).count_ones() as usize;
        step(j, in_set[j], (m - size) % 2 == 1);
    }
}

fn ryser_f64(rows: &[Vec<f64>]) -> f64 {
    let m = rows.len();
    let mut sums = vec![0.0; m];
    let mut total = 0.0;
    gray_walk(m, |j, added, negative| {
        for (s, row) in sums.iter_mut().zip(rows) {
            if added {
                *s += row[j];
            } else {
                *s -= row[j];
            }
        }
        let p: f64 = sums.iter().product();
        if negative {
            total -= p;
        } else {
            total += p;
        }
    });
    total.max(0.0)
}

fn ryser_i128(rows: &[Vec<i128>]) -> Option<i128> {
    let m = rows.len();
    let mut sums = vec![0i128; m];
    let mut total: Option<i128> = Some(0);
    gray_walk(m, |j, added, negative| {
        for (s, row) in sums.iter_mut().zip(rows) {
            *s = if added { *s + row[j] } else { *s - row[j] };
        }
        let p = sums.iter().try_fold(1i128, |acc, &s| acc.checked_mul(s));
        total = match (total, p) {
            (Some(t), Some(p)) if negative => t.checked_sub(p),
            (Some(t), Some(p)) => t.checked_add(p),
            _ => None,
        };
    });
    total
}

fn ryser_big(rows: &[Vec<BigUint>]) -> BigInt {
    let m = rows.len();
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigInt::from(x.clone())).collect())
        .collect();
    let mut sums = vec![BigInt::zero(); m];
    let mut total = BigInt::zero();
    gray_walk(m, |j, added, negative| {
        for (s, row) in sums.iter_mut().zip(&rows) {
            if added {
                *s += &row[j];
            } else {
                *s -= &row[j];
            }
        }
        let p = sums.iter().fold(BigInt::from(1), |acc, s| acc * s);
        if negative {
            total -= p;
        } else {
            total += p;
        }
    });
    total
}

trait Weight: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn add_assign(&mut self, o: Self);
}

impl Weight for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        BigUint::from(1u8)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn add_assign(&mut self, o: Self) {
        *self += o;
    }
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn add_assign(&mut self, o: Self) {
        *self += o;
    }
}

/// Laplace expansion that always expands the remaining row with the fewest
/// usable entries, so rows with a single option are resolved without
/// branching and a row with none prunes the branch.
fn expand<T: Weight>(rows: &[Vec<T>]) -> T {
    fn rec<T: Weight>(rows: &[Vec<T>], row_done: &mut [bool], col_used: &mut [bool], left: usize) -> T {
        if left == 0 {
            return T::one();
        }
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in rows.iter().enumerate() {
            if row_done[i] {
                continue;
            }
            let opts = row
                .iter()
                .enumerate()
                .filter(|(j, x)| !col_used[*j] && !x.is_zero())
                .count();
            if best.is_none_or(|(_, b)| opts < b) {
                best = Some((i, opts));
                if opts <= 1 {
                    break;
                }
            }
        }
        let (i, opts) = best.expect("a row remains");
        if opts == 0 {
            return T::zero();
        }
        row_done[i] = true;
        let mut total = T::zero();
        for j in 0..rows.len() {
            if !col_used[j] && !rows[i][j].is_zero() {
                col_used[j] = true;
                let sub = rec(rows, row_done, col_used, left - 1);
                if !sub.is_zero() {
                    total.add_assign(rows[i][j].mul(&sub));
                }
                col_used[j] = false;
            }
        }
        row_done[i] = false;
        total
    }
    let m = rows.len();
    rec(rows, &mut vec![false; m], &mut vec![false; m], m)
}

/// Exact permanent by sparse Laplace expansion; cost tracks the number of
/// nonzero diagonals rather than `2^m`, so it suits large sparse instances.
pub fn expansion_permanent(b: &BipartiteWeighted) -> PermanentValue {
    match &b.entries {
        Entries::Integer(rows) => PermanentValue::Exact(expand(rows)),
        Entries::Float(rows) => PermanentValue::Float(expand(rows)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn int(rows: &[&[u64]]) -> BipartiteWeighted {
        BipartiteWeighted::integer(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigUint::from(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn exact(v: PermanentValue) -> u64 {
        match v {
            PermanentValue::Exact(x) => x.to_u64().unwrap(),
            PermanentValue::Float(_) => panic!("expected an exact value"),
        }
    }

    #[test]
    fn small_matrices() {
        let ones = int(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(exact(ryser_permanent(&ones, 24).unwrap()), 6);
        assert_eq!(exact(expansion_permanent(&ones)), 6);

        let id = int(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(exact(ryser_permanent(&id, 24).unwrap()), 1);

        // C6 = biadjacency of a 3+3 cycle
        let c6 = int(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(exact(ryser_permanent(&c6, 24).unwrap()), 2);
        assert_eq!(exact(expansion_permanent(&c6)), 2);
    }

    #[test]
    fn empty_and_cap() {
        let empty = BipartiteWeighted::integer(Vec::new()).unwrap();
        assert_eq!(exact(ryser_permanent(&empty, 24).unwrap()), 1);
        assert_eq!(exact(expansion_permanent(&empty)), 1);
        let big = BipartiteWeighted::float(vec![vec![1.0; 5]; 5]).unwrap();
        assert_eq!(
            ryser_permanent(&big, 4).unwrap_err(),
            Error::DimensionOverCap { dim: 5, cap: 4 }
        );
    }

    #[test]
    fn rejects_ragged_and_negative() {
        assert!(BipartiteWeighted::float(vec![vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(BipartiteWeighted::float(vec![vec![-1.0]]).is_err());
    }

    #[test]
    fn huge_entries_fall_back_to_big_integers() {
        let x = BigUint::from(u64::MAX) * BigUint::from(u64::MAX);
        let b = BipartiteWeighted::integer(vec![
            vec![x.clone(), x.clone()],
            vec![x.clone(), x.clone()],
        ])
        .unwrap();
        let want = BigUint::from(2u8) * &x * &x;
        assert_eq!(ryser_permanent(&b, 24).unwrap(), PermanentValue::Exact(want));
    }

    proptest! {
        #[test]
        fn ryser_agrees_with_permutation_sum(
            rows in (1usize..7).prop_flat_map(|m| {
                proptest::collection::vec(proptest::collection::vec(0u32..4, m), m)
            })
        ) {
            let f: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
            let want = oracle::permanent(&f);
            let b = BipartiteWeighted::integer(
                rows.iter().map(|r| r.iter().map(|&x| BigUint::from(x)).collect()).collect(),
            ).unwrap();
            prop_assert_eq!(ryser_permanent(&b, 24).unwrap().to_f64(), want);
            prop_assert_eq!(expansion_permanent(&b).to_f64(), want);
            let fb = BipartiteWeighted::float(f).unwrap();
            let r = ryser_permanent(&fb, 24).unwrap().to_f64();
            prop_assert!((r - want).abs() <= 1e-9 * want.max(1.0));
        }
    }
}
