//! Integer linear algebra: row-style Hermite normal form with a unimodular
//! transform, lattice membership with minimal integer multiple, and integer
//! kernels. All arithmetic is exact over BigInt/BigRational.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// H = U * A with U unimodular; the nonzero rows of `h` (the first `rank`)
/// are an HNF basis of the row lattice of the input.
pub struct Hnf {
    pub h: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub rank: usize,
    /// pivot column of each nonzero row of `h`
    pub pivots: Vec<usize>,
}

pub fn hnf(mat: &[Vec<BigInt>]) -> Hnf {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut a: Vec<Vec<BigInt>> = mat.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let mut r = vec![BigInt::zero(); rows];
            r[i] = BigInt::one();
            r
        })
        .collect();
    let mut r = 0usize;
    let mut pivots = Vec::new();
    for col in 0..cols {
        // seed the pivot with the smallest nonzero entry to limit coefficient
        // growth during elimination
        if let Some(best) = (r..rows)
            .filter(|&i| !a[i][col].is_zero())
            .min_by_key(|&i| a[i][col].abs())
        {
            if best != r {
                a.swap(r, best);
                u.swap(r, best);
            }
        }
        // eliminate below position r in this column via extended gcd row ops
        for i in r + 1..rows {
            if a[i][col].is_zero() {
                continue;
            }
            if a[r][col].is_zero() {
                a.swap(r, i);
                u.swap(r, i);
                continue;
            }
            let eg = a[r][col].extended_gcd(&a[i][col]);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let p = &a[r][col] / &g;
            let q = &a[i][col] / &g;
            for c in 0..cols {
                let new_r = &s * &a[r][c] + &t * &a[i][c];
                let new_i = -&q * &a[r][c] + &p * &a[i][c];
                a[r][c] = new_r;
                a[i][c] = new_i;
            }
            for c in 0..rows {
                let new_r = &s * &u[r][c] + &t * &u[i][c];
                let new_i = -&q * &u[r][c] + &p * &u[i][c];
                u[r][c] = new_r;
                u[i][c] = new_i;
            }
        }
        if a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            for c in 0..cols {
                a[r][c] = -a[r][c].clone();
            }
            for c in 0..rows {
                u[r][c] = -u[r][c].clone();
            }
        }
        // reduce the entries above the pivot into [0, pivot)
        for i in 0..r {
            let q = a[i][col].div_floor(&a[r][col]);
            if q.is_zero() {
                continue;
            }
            for c in 0..cols {
                let sub = &q * &a[r][c];
                a[i][c] -= sub;
            }
            for c in 0..rows {
                let sub = &q * &u[r][c];
                u[i][c] -= sub;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows {
            break;
        }
    }
    Hnf {
        h: a,
        u,
        rank: r,
        pivots,
    }
}

/// Integer kernel of the row map x -> x * A: a basis of the integer row
/// vectors annihilating the matrix (the transform rows past the rank).
pub fn row_kernel(mat: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let h = hnf(mat);
    h.u[h.rank..].to_vec()
}

/// Solves x * H_basis = v exactly over Q (using the nonzero HNF rows).
/// Returns None if v is outside the rational row span.
pub fn solve_rational(hnf: &Hnf, v: &[BigInt]) -> Option<Vec<BigRational>> {
    let mut rem: Vec<BigRational> = v
        .iter()
        .map(|x| BigRational::from(x.clone()))
        .collect();
    let mut x = Vec::with_capacity(hnf.rank);
    for (i, &p) in hnf.pivots.iter().enumerate() {
        let coeff = &rem[p] / BigRational::from(hnf.h[i][p].clone());
        for (c, hv) in hnf.h[i].iter().enumerate() {
            let sub = &coeff * BigRational::from(hv.clone());
            rem[c] -= sub;
        }
        x.push(coeff);
    }
    if rem.iter().all(|q| q.is_zero()) {
        Some(x)
    } else {
        None
    }
}

/// The least positive integer m with m*v inside the row lattice of the
/// original matrix, together with integer coefficients w.r.t. the original
/// rows witnessing m*v. Returns None when v is outside the rational span.
pub fn lattice_multiple(hnf_data: &Hnf, v: &[BigInt]) -> Option<(BigInt, Vec<BigInt>)> {
    let x = solve_rational(hnf_data, v)?;
    let mut m = BigInt::one();
    for q in &x {
        m = m.lcm(q.denom());
    }
    // coefficients of m*v over the HNF rows, then pulled back through U
    let nrows = hnf_data.u.first().map_or(0, |r| r.len());
    let mut witness = vec![BigInt::zero(); nrows];
    for (i, q) in x.iter().enumerate() {
        let scaled = q * BigRational::from(m.clone());
        debug_assert!(scaled.is_integer());
        let ci = scaled.to_integer();
        for (c, uv) in hnf_data.u[i].iter().enumerate() {
            witness[c] += &ci * uv;
        }
    }
    Some((m, witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn check_transform(mat: &[Vec<BigInt>], h: &Hnf) {
        let rows = mat.len();
        let cols = mat[0].len();
        for i in 0..rows {
            for c in 0..cols {
                let mut s = BigInt::zero();
                for k in 0..rows {
                    s += &h.u[i][k] * &mat[k][c];
                }
                assert_eq!(s, h.h[i][c]);
            }
        }
    }

    #[test]
    fn hnf_of_diagonal_lattice() {
        let a = m(&[&[2, 0], &[0, 3], &[2, 3]]);
        let h = hnf(&a);
        assert_eq!(h.rank, 2);
        check_transform(&a, &h);
        assert_eq!(h.h[0], m(&[&[2, 0]])[0]);
        assert_eq!(h.h[1], m(&[&[0, 3]])[0]);
    }

    #[test]
    fn hnf_known_example() {
        // lattice of [[2,4],[3,5]]: det -2, HNF [[1,1],[0,2]]
        let a = m(&[&[2, 4], &[3, 5]]);
        let h = hnf(&a);
        assert_eq!(h.rank, 2);
        check_transform(&a, &h);
        assert_eq!(h.h[0], m(&[&[1, 1]])[0]);
        assert_eq!(h.h[1], m(&[&[0, 2]])[0]);
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = row_kernel(&a);
        assert_eq!(k.len(), 1);
        // kernel vector annihilates the rows
        for c in 0..3 {
            let mut s = BigInt::zero();
            for (i, row) in a.iter().enumerate() {
                s += &k[0][i] * &row[c];
            }
            assert!(s.is_zero());
        }
        // and is primitive up to sign: (2, -1, 0)
        let g = k[0]
            .iter()
            .fold(BigInt::zero(), |acc, x| acc.gcd(x));
        assert_eq!(g, BigInt::one());
    }

    #[test]
    fn lattice_multiple_simple() {
        let a = m(&[&[2, 0], &[0, 4]]);
        let h = hnf(&a);
        let (mult, w) = lattice_multiple(&h, &m(&[&[1, 2]])[0]).unwrap();
        assert_eq!(mult, BigInt::from(2));
        // witness: 2*(1,2) = w0*(2,0) + w1*(0,4)
        assert_eq!(&w[0] * 2, BigInt::from(2));
        assert_eq!(&w[1] * 4, BigInt::from(4));
        assert!(lattice_multiple(&h, &m(&[&[0, 0]])[0]).is_some());
    }

    #[test]
    fn outside_span_is_none() {
        let a = m(&[&[1, 0, 0]]);
        let h = hnf(&a);
        assert!(solve_rational(&h, &m(&[&[0, 1, 0]])[0]).is_none());
        assert!(lattice_multiple(&h, &m(&[&[3, 0, 0]])[0]).is_some());
    }

    #[test]
    fn unimodular_transform_det() {
        // |det U| = 1 for a 3x3 case, via integer row reduction of U
        let a = m(&[&[6, 10, 15], &[10, 15, 6], &[15, 6, 10]]);
        let h = hnf(&a);
        check_transform(&a, &h);
        let u = h.u.clone();
        let det = &u[0][0] * (&u[1][1] * &u[2][2] - &u[1][2] * &u[2][1])
            - &u[0][1] * (&u[1][0] * &u[2][2] - &u[1][2] * &u[2][0])
            + &u[0][2] * (&u[1][0] * &u[2][1] - &u[1][1] * &u[2][0]);
        assert_eq!(det.abs(), BigInt::one());
    }
}
