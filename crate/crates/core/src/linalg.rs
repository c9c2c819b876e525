//! Exact rank computations.
//!
//! Three independent routines live here:
//! * [`rank_bareiss`], dense fraction-free elimination over the integers;
//! * [`rank_rational_gauss`], textbook Gaussian elimination over `BigRational`;
//! * [`SparseEchelon`], an incremental sparse row-echelon builder over the
//!   integers that keeps every stored row primitive (content 1).
//!
//! All three return the exact rank; they are kept separate so that they can be
//! checked against each other.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Multiplies a rational row by the lcm of its denominators and divides out the
/// content, giving a primitive integer row spanning the same line.
pub fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for q in row {
        if !q.is_zero() {
            lcm = lcm.lcm(q.denom());
        }
    }
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|q| {
            if q.is_zero() {
                BigInt::zero()
            } else {
                q.numer() * (&lcm / q.denom())
            }
        })
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                return;
            }
        }
    }
    if g > BigInt::one() {
        for v in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// Rank of an integer matrix by Bareiss fraction-free elimination. Columns
/// without a pivot are skipped, the exact-division property still holds
/// because every intermediate entry is a minor on the chosen pivot columns.
pub fn rank_bareiss(matrix: &[Vec<BigInt>]) -> usize {
    let nrows = matrix.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = matrix[0].len();
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            if factor.is_zero() {
                if !prev.is_one() || !pivot.is_one() {
                    for j in col + 1..ncols {
                        if !row[j].is_zero() {
                            row[j] = &pivot * &row[j] / &prev;
                        }
                    }
                }
                continue;
            }
            for j in col + 1..ncols {
                let v = &pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Rank of a rational matrix by plain Gaussian elimination with exact
/// `BigRational` arithmetic.
pub fn rank_rational_gauss(matrix: &[Vec<BigRational>]) -> usize {
    let nrows = matrix.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = matrix[0].len();
    let mut a = matrix.to_vec();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][col].recip();
        for j in col..ncols {
            a[rank][j] = &a[rank][j] * &inv;
        }
        for i in 0..nrows {
            if i == rank || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in col..ncols {
                let delta = &f * &a[rank][j];
                a[i][j] -= delta;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// A sparse integer row: strictly increasing column indices, nonzero values.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Integer arithmetic used by the sparse echelon builder. Operations return
/// `None` on overflow so a fixed-width attempt can bail out early.
trait EchelonInt: Clone + PartialEq {
    fn e_zero(&self) -> bool;
    fn e_neg_sign(&self) -> bool;
    fn e_neg(&self) -> Option<Self>;
    fn e_gcd(&self, other: &Self) -> Self;
    fn e_one(&self) -> bool;
    fn e_mul(&self, other: &Self) -> Option<Self>;
    fn e_sub(&self, other: &Self) -> Option<Self>;
    fn e_div(&self, other: &Self) -> Self;
}

impl EchelonInt for i128 {
    fn e_zero(&self) -> bool {
        *self == 0
    }
    fn e_neg_sign(&self) -> bool {
        *self < 0
    }
    fn e_neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn e_gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.unsigned_abs(), other.unsigned_abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a as i128
    }
    fn e_one(&self) -> bool {
        *self == 1
    }
    fn e_mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn e_sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn e_div(&self, other: &Self) -> Self {
        self / other
    }
}

impl EchelonInt for BigInt {
    fn e_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn e_neg_sign(&self) -> bool {
        Signed::is_negative(self)
    }
    fn e_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn e_gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn e_one(&self) -> bool {
        One::is_one(self)
    }
    fn e_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn e_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn e_div(&self, other: &Self) -> Self {
        self / other
    }
}

struct Echelon<T> {
    pivots: HashMap<usize, Vec<(usize, T)>>,
}

impl<T: EchelonInt> Echelon<T> {
    fn new() -> Self {
        Echelon {
            pivots: HashMap::new(),
        }
    }

    /// `Some(independent?)`, or `None` if the arithmetic overflowed.
    fn add_row(&mut self, mut row: Vec<(usize, T)>) -> Option<bool> {
        row.retain(|(_, v)| !v.e_zero());
        row.sort_by_key(|(c, _)| *c);
        primitive_sparse(&mut row);
        while let Some((lead, _)) = row.first() {
            match self.pivots.get(lead) {
                None => {
                    let lead = *lead;
                    if row[0].1.e_neg_sign() {
                        for (_, v) in row.iter_mut() {
                            *v = v.e_neg()?;
                        }
                    }
                    self.pivots.insert(lead, row);
                    return Some(true);
                }
                Some(pivot) => {
                    row = eliminate(&row, pivot)?;
                    primitive_sparse(&mut row);
                }
            }
        }
        Some(false)
    }
}

fn primitive_sparse<T: EchelonInt>(row: &mut [(usize, T)]) {
    let Some(first) = row.first() else {
        return;
    };
    let mut g = first.1.e_gcd(&first.1);
    for (_, v) in row.iter().skip(1) {
        if g.e_one() {
            return;
        }
        g = g.e_gcd(v);
    }
    if !g.e_one() {
        for (_, v) in row.iter_mut() {
            *v = v.e_div(&g);
        }
    }
}

/// `a * row - b * pivot` with `a`, `b` chosen to cancel the shared leading
/// column.
fn eliminate<T: EchelonInt>(row: &[(usize, T)], pivot: &[(usize, T)]) -> Option<Vec<(usize, T)>> {
    let r0 = &row[0].1;
    let p0 = &pivot[0].1;
    let g = r0.e_gcd(p0);
    let a = p0.e_div(&g);
    let b = r0.e_div(&g);
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push((ci, a.e_mul(&row[i].1)?));
            i += 1;
        } else if cj < ci {
            out.push((cj, b.e_mul(&pivot[j].1)?.e_neg()?));
            j += 1;
        } else {
            let v = a.e_mul(&row[i].1)?.e_sub(&b.e_mul(&pivot[j].1)?)?;
            if !v.e_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Incremental row-echelon form over the integers. Rows are reduced against
/// stored pivots as they arrive; a row that survives becomes a new pivot and
/// is kept primitive. Arithmetic starts in `i128` and switches to `BigInt`
/// (replaying the rows seen so far) on the first overflow.
pub struct SparseEchelon {
    small: Option<Echelon<i128>>,
    big: Option<Echelon<BigInt>>,
    history: Vec<SparseRow>,
}

impl Default for SparseEchelon {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for SparseEchelon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SparseEchelon").field("rank", &self.rank()).finish()
    }
}

impl SparseEchelon {
    pub fn new() -> Self {
        SparseEchelon {
            small: Some(Echelon::new()),
            big: None,
            history: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        match (&self.small, &self.big) {
            (_, Some(b)) => b.pivots.len(),
            (Some(s), None) => s.pivots.len(),
            (None, None) => 0,
        }
    }

    /// Returns `true` when the row was independent of everything seen so far.
    pub fn add_row(&mut self, row: SparseRow) -> bool {
        if let Some(small) = &mut self.small {
            let narrow: Option<Vec<(usize, i128)>> = row
                .iter()
                .map(|(c, v)| i128::try_from(v).ok().map(|v| (*c, v)))
                .collect();
            if let Some(narrow) = narrow {
                if let Some(result) = small.add_row(narrow) {
                    self.history.push(row);
                    return result;
                }
            }
            // Overflow: rebuild over BigInt from the rows accepted so far.
            self.small = None;
            let mut big = Echelon::new();
            for old in std::mem::take(&mut self.history) {
                big.add_row(old).expect("BigInt arithmetic cannot overflow");
            }
            self.big = Some(big);
        }
        if self.big.is_none() {
            self.big = Some(Echelon::new());
        }
        self.big
            .as_mut()
            .unwrap()
            .add_row(row)
            .expect("BigInt arithmetic cannot overflow")
    }
}

/// Rank of a dense integer matrix through [`SparseEchelon`].
pub fn rank_sparse(matrix: &[Vec<BigInt>]) -> usize {
    let mut ech = SparseEchelon::new();
    for row in matrix {
        let sparse: SparseRow = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, v.clone()))
            .collect();
        ech.add_row(sparse);
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn rats(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect()
    }

    #[test]
    fn small_ranks_agree() {
        let cases: Vec<(Vec<&[i64]>, usize)> = vec![
            (vec![&[1, 2], &[2, 4]], 1),
            (vec![&[0, 0], &[0, 0]], 0),
            (vec![&[0, 1, 2], &[1, 0, 3], &[1, 1, 5]], 2),
            (vec![&[1, 1, 1, 1], &[0, 1, 2, 3], &[0, 1, 4, 9]], 3),
            (vec![&[2, 4, 6], &[0, 0, 5], &[0, 0, 7], &[3, 6, 1]], 2),
        ];
        for (m, expected) in cases {
            let m: Vec<&[i64]> = m;
            assert_eq!(rank_bareiss(&ints(&m)), expected);
            assert_eq!(rank_rational_gauss(&rats(&m)), expected);
            assert_eq!(rank_sparse(&ints(&m)), expected);
        }
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 62);
        let rows = vec![
            vec![big.clone(), BigInt::from(3), BigInt::from(1)],
            vec![BigInt::from(7), big.clone() + 1, BigInt::from(2)],
            vec![BigInt::from(5), BigInt::from(11), big.clone() * 3 + 1],
            vec![big.clone() * 2 + 7, big.clone() + 14, BigInt::from(4)],
        ];
        assert_eq!(rank_bareiss(&rows), rank_sparse(&rows));
        let rats: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
            .collect();
        assert_eq!(rank_rational_gauss(&rats), rank_sparse(&rows));
    }

    #[test]
    fn integer_row_clears_denominators() {
        let row = vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-1).into(), 3.into()),
            BigRational::zero(),
        ];
        let out = integer_row(&row);
        assert_eq!(out, vec![BigInt::from(3), BigInt::from(-2), BigInt::zero()]);
    }
}
