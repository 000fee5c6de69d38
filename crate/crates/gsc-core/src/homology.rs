//! Integer Smith normal form and the cycle-space bookkeeping used to decide
//! circle-ness and to build winding cocycles.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

/// Smith normal form of an integer matrix, with the column transform kept so
/// callers can read off coordinates in the diagonalizing basis.
pub struct Snf {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_r`, all positive.
    pub invariants: Vec<BigInt>,
    /// Number of columns of the input (ambient rank).
    pub cols: usize,
    /// Unimodular `cols × cols` matrix `V` with `U · M · V` diagonal.
    pub col_transform: Vec<Vec<BigInt>>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Free rank of `Z^cols / rowspace(M)`.
    pub fn quotient_free_rank(&self) -> usize {
        self.cols - self.rank()
    }

    /// True when the quotient has no torsion (all invariant factors are 1).
    pub fn quotient_torsion_free(&self) -> bool {
        self.invariants.iter().all(|d| d.is_one())
    }

    /// The functional `x ↦ (x · V)_{k}` for the `k`-th free coordinate of
    /// the quotient, expressed as the corresponding column of `V`. It kills
    /// the row space and generates `Hom` of the free part together with its
    /// siblings.
    pub fn free_coordinate(&self, k: usize) -> Vec<BigInt> {
        let col = self.rank() + k;
        (0..self.cols).map(|r| self.col_transform[r][col].clone()).collect()
    }
}

/// Computes the Smith normal form of `mat` (rows × cols), returning the
/// invariant factors and the column transform. Classic pivot-and-reduce; the
/// matrices this crate produces are small, so clarity wins over speed.
pub fn smith_normal_form(mut mat: Vec<Vec<BigInt>>, cols: usize) -> Snf {
    let rows = mat.len();
    for row in &mat {
        assert_eq!(row.len(), cols);
    }
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let mut t = 0usize;
    let mut diag: Vec<BigInt> = Vec::new();

    while t < rows.min(cols) {
        // Find a pivot with the smallest nonzero absolute value.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !mat[i][j].is_zero() {
                    let better = match &pivot {
                        None => true,
                        Some((pi, pj)) => mat[i][j].abs() < mat[*pi][*pj].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        mat.swap(t, pi);
        swap_cols(&mut mat, &mut v, t, pj);

        let mut clean = true;
        // Clear the pivot row and column.
        for i in t + 1..rows {
            if !mat[i][t].is_zero() {
                let q = div_round(&mat[i][t], &mat[t][t]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let delta = &q * &mat[t][j];
                        mat[i][j] -= delta;
                    }
                }
                if !mat[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..cols {
            if !mat[t][j].is_zero() {
                let q = div_round(&mat[t][j], &mat[t][t]);
                if !q.is_zero() {
                    add_col_multiple(&mut mat, &mut v, j, t, &-&q);
                }
                if !mat[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // smaller remainders now exist; repick the pivot
        }
        if mat[t][t].is_negative() {
            negate_col(&mut mat, &mut v, t);
        }
        diag.push(mat[t][t].clone());
        t += 1;
    }

    // Enforce divisibility d_i | d_{i+1} on the invariant list. A full SNF
    // would realize this with column ops among pivot columns; those never
    // touch the free columns of V, which are the only part of the transform
    // read back (via `free_coordinate`), so adjusting the list suffices.
    let mut i = 0;
    while i + 1 < diag.len() {
        if (&diag[i + 1] % &diag[i]).is_zero() {
            i += 1;
            continue;
        }
        let g = diag[i].gcd(&diag[i + 1]);
        let l = (&diag[i] / &g) * &diag[i + 1];
        diag[i] = g;
        diag[i + 1] = l;
        i = 0;
    }

    Snf { invariants: diag, cols, col_transform: v }
}

fn swap_cols(mat: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in mat.iter_mut() {
        row.swap(a, b);
    }
    for row in v.iter_mut() {
        row.swap(a, b);
    }
}

/// col_j += q * col_k
fn add_col_multiple(mat: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], j: usize, k: usize, q: &BigInt) {
    for row in mat.iter_mut() {
        let delta = q * &row[k];
        row[j] += delta;
    }
    for row in v.iter_mut() {
        let delta = q * &row[k];
        row[j] += delta;
    }
}

fn negate_col(mat: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], j: usize) {
    for row in mat.iter_mut() {
        let x = -&row[j];
        row[j] = x;
    }
    for row in v.iter_mut() {
        let x = -&row[j];
        row[j] = x;
    }
}

/// Rounded division minimizing the remainder's absolute value.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r: BigInt = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]], cols: usize) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                r.iter().map(|&x| BigInt::from(x)).collect()
            })
            .collect()
    }

    #[test]
    fn snf_of_simple_relations() {
        // Z^3 / <e0 + e1, e1 + e2> = Z, torsion free.
        let snf = smith_normal_form(big(&[&[1, 1, 0], &[0, 1, 1]], 3), 3);
        assert_eq!(snf.rank(), 2);
        assert!(snf.quotient_torsion_free());
        assert_eq!(snf.quotient_free_rank(), 1);
        // The free functional kills both relations and is primitive.
        let f = snf.free_coordinate(0);
        let dot = |v: &[i64]| -> BigInt { v.iter().zip(&f).map(|(&a, b)| b * a).sum() };
        assert_eq!(dot(&[1, 1, 0]), BigInt::zero());
        assert_eq!(dot(&[0, 1, 1]), BigInt::zero());
        // primitive: gcd of entries is 1
        let g = f.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        assert_eq!(g, BigInt::one());
    }

    #[test]
    fn snf_detects_torsion() {
        // Z^2 / <2e0, e1> = Z/2.
        let snf = smith_normal_form(big(&[&[2, 0], &[0, 1]], 2), 2);
        assert_eq!(snf.rank(), 2);
        assert!(!snf.quotient_torsion_free());
        assert_eq!(snf.quotient_free_rank(), 0);
    }

    #[test]
    fn snf_of_empty_relations() {
        let snf = smith_normal_form(Vec::new(), 2);
        assert_eq!(snf.rank(), 0);
        assert_eq!(snf.quotient_free_rank(), 2);
    }
}
