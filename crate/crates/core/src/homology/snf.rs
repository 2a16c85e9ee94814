//! Smith normal form over the integers.
//!
//! Elimination runs first on `i64` with checked arithmetic; if any step would
//! overflow, the whole reduction is redone on `BigInt`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed};

/// Dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Exact product; `None` on `i64` overflow.
    pub fn checked_mul(&self, other: &IntMatrix) -> Option<IntMatrix> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).checked_add(a.checked_mul(other.get(k, j))?)?;
                    out.set(i, j, v);
                }
            }
        }
        Some(out)
    }
}

/// Invariant factors `d_1 | d_2 | ... | d_r` of a matrix (nonzero only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub invariants: Vec<BigUint>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigUint> {
        self.invariants
            .iter()
            .filter(|d| **d > BigUint::one())
            .cloned()
            .collect()
    }
}

trait Entry: Clone + Integer + Signed {
    /// `self - q * b`, or `None` on overflow.
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn to_biguint(&self) -> BigUint;
}

impl Entry for i64 {
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        // i64::MIN has no absolute value
        self.checked_sub(q.checked_mul(*b)?)
            .filter(|&x| x != i64::MIN)
    }

    fn to_biguint(&self) -> BigUint {
        BigUint::from(self.unsigned_abs())
    }
}

impl Entry for BigInt {
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }

    fn to_biguint(&self) -> BigUint {
        self.magnitude().clone()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let small: Vec<Vec<i64>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let attempt = if m.data.contains(&i64::MIN) {
        None
    } else {
        diagonalize(small)
    };
    let diagonal = match attempt {
        Some(d) => d,
        None => {
            let big: Vec<Vec<BigInt>> = (0..m.rows)
                .map(|i| m.row(i).iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            diagonalize(big).expect("BigInt elimination cannot overflow")
        }
    };
    SmithForm {
        invariants: divisibility_chain(diagonal),
    }
}

/// Reduces to a diagonal by unimodular row and column operations, pivoting
/// on the smallest nonzero magnitude. Returns the nonzero diagonal entries
/// (as magnitudes) in pivot order.
#[allow(clippy::needless_range_loop)]
fn diagonalize<T: Entry>(mut a: Vec<Vec<T>>) -> Option<Vec<BigUint>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_nonzero(&a, t, t) else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    a[i][j] = a[i][j].sub_mul(&q, &a[t][j])?;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    a[i][j] = a[i][j].sub_mul(&q, &a[i][t])?;
                }
                dirty |= !a[t][j].is_zero();
            }
            if !dirty {
                break;
            }
            // a remainder smaller than the pivot is left in row or column t
            let mut best = (t, t);
            for i in t + 1..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            swap_cols(&mut a, t, best.1);
        }
        out.push(a[t][t].to_biguint());
    }
    Some(out)
}

fn min_nonzero<T: Entry>(a: &[Vec<T>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, x) in row.iter().enumerate().skip(c0) {
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if x.abs() >= a[bi][bj].abs() => {}
                _ => best = Some((i, j)),
            }
            if x.abs().is_one() {
                return best;
            }
        }
    }
    best
}

fn swap_cols<T>(a: &mut [Vec<T>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// Replaces pairs by (gcd, lcm) until each entry divides the next; this
/// sorts the exponent of every prime simultaneously.
fn divisibility_chain(mut d: Vec<BigUint>) -> Vec<BigUint> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Rank over GF(2); a cross-check only.
pub fn rank_mod2(m: &IntMatrix) -> usize {
    let words = m.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| {
            let mut bits = vec![0u64; words];
            for (j, &x) in m.row(i).iter().enumerate() {
                if x.rem_euclid(2) == 1 {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            bits
        })
        .collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}
