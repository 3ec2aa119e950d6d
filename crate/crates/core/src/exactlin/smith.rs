use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::hermite::row_hermite_form;
use super::matrix::IntegerMatrix;
use crate::error::{Error, Result};

/// `left * M * right` is the diagonal matrix carrying `diagonal` in its leading entries.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    /// Non-zero invariant factors d1 | d2 | ... | dk, all positive.
    pub diagonal: Vec<BigInt>,
    pub left: IntegerMatrix,
    pub left_inverse: IntegerMatrix,
    pub right: IntegerMatrix,
    pub right_inverse: IntegerMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Product of the invariant factors, the order of the torsion of the cokernel.
    pub fn torsion(&self) -> BigInt {
        self.diagonal.iter().product()
    }
}

struct Reducer {
    a: IntegerMatrix,
    u: IntegerMatrix,
    u_inv: IntegerMatrix,
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

impl Reducer {
    fn row_add(&mut self, target: usize, source: usize, factor: &BigInt) {
        self.a.add_row_multiple(target, source, factor);
        self.u.add_row_multiple(target, source, factor);
        self.u_inv.add_col_multiple(source, target, &-factor);
    }

    fn col_add(&mut self, target: usize, source: usize, factor: &BigInt) {
        self.a.add_col_multiple(target, source, factor);
        self.v.add_col_multiple(target, source, factor);
        self.v_inv.add_row_multiple(source, target, &-factor);
    }

    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.u.swap_rows(x, y);
        self.u_inv.swap_cols(x, y);
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        self.v.swap_cols(x, y);
        self.v_inv.swap_rows(x, y);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                    best = Some(((i, j), ax));
                }
            }
        }
        best.map(|(p, _)| p)
    }

    fn smallest_on_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        let cells = (t + 1..self.a.rows())
            .map(|i| (i, t))
            .chain((t + 1..self.a.cols()).map(|j| (t, j)));
        for (i, j) in cells {
            let x = &self.a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                best = Some(((i, j), ax));
            }
        }
        best.map(|(p, _)| p)
    }

    fn move_to_pivot(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
    }

    fn run(&mut self) -> usize {
        let bound = self.a.rows().min(self.a.cols());
        let mut t = 0;
        while t < bound {
            let Some(pos) = self.smallest_in_block(t) else {
                break;
            };
            self.move_to_pivot(t, pos);
            loop {
                let pivot = self.a[(t, t)].clone();
                for i in t + 1..self.a.rows() {
                    if !self.a[(i, t)].is_zero() {
                        let q = self.a[(i, t)].div_floor(&pivot);
                        self.row_add(i, t, &-q);
                    }
                }
                for j in t + 1..self.a.cols() {
                    if !self.a[(t, j)].is_zero() {
                        let q = self.a[(t, j)].div_floor(&pivot);
                        self.col_add(j, t, &-q);
                    }
                }
                if let Some(pos) = self.smallest_on_cross(t) {
                    self.move_to_pivot(t, pos);
                    continue;
                }
                let offender = (t + 1..self.a.rows()).find(|&i| {
                    (t + 1..self.a.cols()).any(|j| !self.a[(i, j)].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.row_add(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

/// Smith normal form with unimodular transforms (smallest-pivot strategy).
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let mut r = Reducer {
        a: m.clone(),
        u: IntegerMatrix::identity(m.rows()),
        u_inv: IntegerMatrix::identity(m.rows()),
        v: IntegerMatrix::identity(m.cols()),
        v_inv: IntegerMatrix::identity(m.cols()),
    };
    let rank = r.run();
    SmithDecomposition {
        diagonal: (0..rank).map(|t| r.a[(t, t)].clone()).collect(),
        left: r.u,
        left_inverse: r.u_inv,
        right: r.v,
        right_inverse: r.v_inv,
    }
}

pub fn rank_over_z(m: &IntegerMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// Order of the torsion subgroup of `Z^ambient_rank / <columns of generators>`.
pub fn torsion_order(ambient_rank: usize, generators: &IntegerMatrix) -> BigInt {
    assert_eq!(
        generators.rows(),
        ambient_rank,
        "generators must live in Z^ambient_rank"
    );
    smith_normal_form(generators).torsion()
}

fn hermite_columns(rows: usize, vectors: Vec<Vec<BigInt>>) -> IntegerMatrix {
    let basis = row_hermite_form(vectors, rows);
    IntegerMatrix::from_columns(rows, &basis)
}

/// Z-basis (as columns, in Hermite normal form) of `span_Q(generators) ∩ Z^ambient_rank`.
pub fn saturation_basis(ambient_rank: usize, generators: &IntegerMatrix) -> IntegerMatrix {
    assert_eq!(
        generators.rows(),
        ambient_rank,
        "generators must live in Z^ambient_rank"
    );
    let snf = smith_normal_form(generators);
    let vectors = (0..snf.rank())
        .map(|j| snf.left_inverse.column(j))
        .collect();
    hermite_columns(ambient_rank, vectors)
}

/// Z-basis (as columns, in Hermite normal form) of the integer kernel of `m`.
pub fn integer_kernel_basis(m: &IntegerMatrix) -> IntegerMatrix {
    let snf = smith_normal_form(m);
    let vectors = (snf.rank()..m.cols())
        .map(|j| snf.right.column(j))
        .collect();
    hermite_columns(m.cols(), vectors)
}

pub fn det_sign(m: &IntegerMatrix) -> Result<i32> {
    let det = m.determinant().ok_or(Error::NotSquare {
        rows: m.rows(),
        cols: m.cols(),
    })?;
    Ok(if det.is_zero() {
        0
    } else if det.is_positive() {
        1
    } else {
        -1
    })
}

/// Some rational solution of `m x = v`, or `None` when the system is inconsistent.
pub fn rational_solve(m: &IntegerMatrix, v: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(v.len(), m.rows(), "right-hand side has the wrong length");
    let snf = smith_normal_form(m);
    let uv: Vec<BigRational> = (0..m.rows())
        .map(|i| {
            (0..m.rows())
                .map(|k| BigRational::from_integer(snf.left[(i, k)].clone()) * &v[k])
                .sum()
        })
        .collect();
    if uv[snf.rank()..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let z: Vec<BigRational> = (0..m.cols())
        .map(|l| match snf.diagonal.get(l) {
            Some(d) => &uv[l] / BigRational::from_integer(d.clone()),
            None => BigRational::zero(),
        })
        .collect();
    Some(
        (0..m.cols())
            .map(|i| {
                (0..m.cols())
                    .map(|k| BigRational::from_integer(snf.right[(i, k)].clone()) * &z[k])
                    .sum()
            })
            .collect(),
    )
}

/// Integer coordinates of `v` in the lattice basis given by the columns of `basis`.
pub fn lattice_coordinates(basis: &IntegerMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let rhs: Vec<BigRational> = v.iter().cloned().map(BigRational::from_integer).collect();
    let x = rational_solve(basis, &rhs)?;
    x.into_iter()
        .map(|q| q.is_integer().then(|| q.to_integer()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn diagonal_matrix(rows: usize, cols: usize, d: &[BigInt]) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(rows, cols);
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    fn check_decomposition(m: &IntegerMatrix) -> SmithDecomposition {
        let snf = smith_normal_form(m);
        let prod = snf.left.mul(m).mul(&snf.right);
        assert_eq!(prod, diagonal_matrix(m.rows(), m.cols(), &snf.diagonal));
        assert_eq!(
            snf.left.mul(&snf.left_inverse),
            IntegerMatrix::identity(m.rows())
        );
        assert_eq!(
            snf.right.mul(&snf.right_inverse),
            IntegerMatrix::identity(m.cols())
        );
        for w in snf.diagonal.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        snf
    }

    #[test]
    fn identity_has_unit_diagonal() {
        let snf = check_decomposition(&IntegerMatrix::identity(2));
        assert_eq!(snf.diagonal, big(&[1, 1]));
    }

    #[test]
    fn two_columns_with_index_two() {
        let m = IntegerMatrix::from_rows(&[[0, 2], [1, 1], [0, 0]]);
        let snf = check_decomposition(&m);
        assert_eq!(snf.diagonal, big(&[1, 2]));
        assert_eq!(torsion_order(3, &m), BigInt::from(2));
    }

    #[test]
    fn zero_matrix_has_empty_diagonal() {
        let snf = check_decomposition(&IntegerMatrix::zeros(3, 2));
        assert!(snf.diagonal.is_empty());
        assert_eq!(rank_over_z(&IntegerMatrix::zeros(3, 2)), 0);
    }

    #[test]
    fn degenerate_shapes() {
        check_decomposition(&IntegerMatrix::zeros(0, 3));
        check_decomposition(&IntegerMatrix::zeros(2, 0));
        assert_eq!(torsion_order(0, &IntegerMatrix::zeros(0, 0)), BigInt::one());
    }

    #[test]
    fn divisibility_forced_by_row_mixing() {
        let m = IntegerMatrix::from_rows(&[[2, 0], [0, 3]]);
        assert_eq!(check_decomposition(&m).diagonal, big(&[1, 6]));
        let m = IntegerMatrix::from_rows(&[[4, 0, 0], [0, 6, 0], [0, 0, 10]]);
        assert_eq!(check_decomposition(&m).diagonal, big(&[2, 2, 60]));
    }

    #[test]
    fn four_generators_torsion_two() {
        // columns (1,0,0),(0,1,0),(2,1,0),(1,0,2)
        let m = IntegerMatrix::from_rows(&[[1, 0, 2, 1], [0, 1, 1, 0], [0, 0, 0, 2]]);
        assert_eq!(torsion_order(3, &m), BigInt::from(2));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_over_z(&IntegerMatrix::identity(4)), 4);
        assert_eq!(
            rank_over_z(&IntegerMatrix::from_rows(&[[1, 0, 1], [0, 1, 1]])),
            2
        );
    }

    #[test]
    fn saturation_examples() {
        let m = IntegerMatrix::from_rows(&[[2], [0]]);
        assert_eq!(
            saturation_basis(2, &m),
            IntegerMatrix::from_rows(&[[1], [0]])
        );
        let m = IntegerMatrix::from_rows(&[[0, 2], [1, 1], [0, 0]]);
        assert_eq!(
            saturation_basis(3, &m),
            IntegerMatrix::from_rows(&[[1, 0], [0, 1], [0, 0]])
        );
        assert_eq!(
            saturation_basis(3, &IntegerMatrix::identity(3)),
            IntegerMatrix::identity(3)
        );
    }

    #[test]
    fn kernel_examples() {
        let k = integer_kernel_basis(&IntegerMatrix::from_rows(&[[1, 0, 1], [0, 1, 1]]));
        assert_eq!(k, IntegerMatrix::from_rows(&[[1], [1], [-1]]));
        let k = integer_kernel_basis(&IntegerMatrix::identity(3));
        assert_eq!(k.cols(), 0);
        let k = integer_kernel_basis(&IntegerMatrix::from_rows(&[[2, 2], [1, 1]]));
        assert_eq!(k, IntegerMatrix::from_rows(&[[1], [-1]]));
    }

    #[test]
    fn determinant_signs() {
        assert_eq!(det_sign(&IntegerMatrix::identity(3)), Ok(1));
        assert_eq!(
            det_sign(&IntegerMatrix::from_rows(&[[0, 1], [1, 1]])),
            Ok(-1)
        );
        assert_eq!(
            det_sign(&IntegerMatrix::from_rows(&[[1, 2], [2, 4]])),
            Ok(0)
        );
        assert!(det_sign(&IntegerMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn solve_examples() {
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        let v = vec![q(3), q(-1)];
        assert_eq!(
            rational_solve(&IntegerMatrix::identity(2), &v),
            Some(v.clone())
        );
        let m = IntegerMatrix::from_rows(&[[1, 0], [0, 1], [1, 1]]);
        assert_eq!(rational_solve(&m, &[q(0), q(0), q(1)]), None);
        let zero = IntegerMatrix::zeros(2, 2);
        assert_eq!(rational_solve(&zero, &[q(0), q(0)]), Some(vec![q(0), q(0)]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix() -> impl Strategy<Value = IntegerMatrix> {
            (0usize..4, 0usize..5).prop_flat_map(|(r, c)| {
                proptest::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
                    IntegerMatrix::new(r, c, v.into_iter().map(BigInt::from).collect())
                })
            })
        }

        proptest! {
            #[test]
            fn decomposition_reconstructs(m in small_matrix()) {
                check_decomposition(&m);
            }

            #[test]
            fn kernel_pairs_to_zero(m in small_matrix()) {
                let k = integer_kernel_basis(&m);
                prop_assert_eq!(k.cols(), m.cols() - rank_over_z(&m));
                prop_assert!(m.mul(&k).is_zero());
            }

            #[test]
            fn saturation_is_saturated(m in small_matrix()) {
                let s = saturation_basis(m.rows(), &m);
                prop_assert_eq!(s.cols(), rank_over_z(&m));
                prop_assert_eq!(torsion_order(m.rows(), &s), BigInt::one());
                for j in 0..m.cols() {
                    let rhs: Vec<BigRational> =
                        m.column(j).into_iter().map(BigRational::from_integer).collect();
                    prop_assert!(rational_solve(&s, &rhs).is_some());
                }
            }

            #[test]
            fn torsion_of_square_is_abs_det(v in proptest::collection::vec(-6i64..=6, 9)) {
                let m = IntegerMatrix::new(3, 3, v.into_iter().map(BigInt::from).collect());
                let det = m.determinant().unwrap();
                if !det.is_zero() {
                    prop_assert_eq!(torsion_order(3, &m), det.abs());
                }
            }
        }
    }
}
