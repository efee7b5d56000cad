//! Exact 3×3 integer matrices. Row vectors act on the left: `x ↦ x·M`.

use std::fmt;
use std::ops::Mul;

use dashu::base::{BitTest, UnsignedAbs};
use dashu::integer::IBig;
use serde::{Serialize, Serializer};

use crate::poly::Cubic;
use crate::NumError;

pub type Vec3 = [IBig; 3];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat3 {
    pub e: [[IBig; 3]; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    /// Abelianization of χ_k.
    A(u64),
    AInv(u64),
    /// The conjugate cocycle U·A_k⁻¹·U⁻¹.
    B(u64),
    U,
    /// A_1^r via the closed forms for odd and even powers.
    A1Pow(u64),
}

impl Mat3 {
    pub fn from_i64(rows: [[i64; 3]; 3]) -> Self {
        Mat3 {
            e: rows.map(|r| r.map(IBig::from)),
        }
    }

    pub fn identity() -> Self {
        Self::from_i64([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn get(&self, i: usize, j: usize) -> &IBig {
        &self.e[i][j]
    }

    pub fn row(&self, i: usize) -> &Vec3 {
        &self.e[i]
    }

    pub fn col(&self, j: usize) -> Vec3 {
        [self.e[0][j].clone(), self.e[1][j].clone(), self.e[2][j].clone()]
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3 {
            e: [self.col(0), self.col(1), self.col(2)],
        }
    }

    pub fn det(&self) -> IBig {
        let e = &self.e;
        &e[0][0] * (&e[1][1] * &e[2][2] - &e[1][2] * &e[2][1])
            - &e[0][1] * (&e[1][0] * &e[2][2] - &e[1][2] * &e[2][0])
            + &e[0][2] * (&e[1][0] * &e[2][1] - &e[1][1] * &e[2][0])
    }

    pub fn trace(&self) -> IBig {
        &self.e[0][0] + &self.e[1][1] + &self.e[2][2]
    }

    /// Sum of the principal 2×2 minors.
    pub fn minor_sum(&self) -> IBig {
        let e = &self.e;
        let m = |i: usize, j: usize| &e[i][i] * &e[j][j] - &e[i][j] * &e[j][i];
        m(0, 1) + m(0, 2) + m(1, 2)
    }

    /// det(λI − M) = λ³ − tr·λ² + m₂·λ − det.
    pub fn charpoly(&self) -> Cubic {
        Cubic::new(IBig::ONE, -self.trace(), self.minor_sum(), -self.det())
    }

    pub fn entries(&self) -> impl Iterator<Item = &IBig> {
        self.e.iter().flat_map(|r| r.iter())
    }

    pub fn min_entry(&self) -> IBig {
        self.entries().min().cloned().expect("nine entries")
    }

    pub fn max_entry(&self) -> IBig {
        self.entries().max().cloned().expect("nine entries")
    }

    /// Strictly positive ("full") matrix.
    pub fn is_positive(&self) -> bool {
        self.entries().all(|x| *x > IBig::ZERO)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries().all(|x| *x >= IBig::ZERO)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, x: &Vec3) -> Vec3 {
        std::array::from_fn(|j| &x[0] * &self.e[0][j] + &x[1] * &self.e[1][j] + &x[2] * &self.e[2][j])
    }

    /// Largest entry bit length, a cheap size measure.
    pub fn bit_size(&self) -> usize {
        self.entries().map(|x| x.unsigned_abs().bit_len()).max().unwrap_or(0)
    }
}

impl Mul for &Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: &Mat3) -> Mat3 {
        Mat3 {
            e: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    &self.e[i][0] * &rhs.e[0][j] + &self.e[i][1] * &rhs.e[1][j] + &self.e[i][2] * &rhs.e[2][j]
                })
            }),
        }
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        &self * &rhs
    }
}

impl fmt::Debug for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.e.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{},{},{}]", r[0], r[1], r[2])?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Rows of decimal strings, so that large entries survive JSON consumers.
impl Serialize for Mat3 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.e.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

pub fn make_matrix(kind: MatrixKind) -> Result<Mat3, NumError> {
    let nonzero = |k: u64| if k == 0 { Err(NumError::ZeroIndex) } else { Ok(k as i64) };
    Ok(match kind {
        MatrixKind::A(k) => {
            let k = nonzero(k)?;
            Mat3::from_i64([[0, k, k - 1], [1, 0, 0], [0, 1, 1]])
        }
        MatrixKind::AInv(k) => {
            let k = nonzero(k)?;
            Mat3::from_i64([[0, 1, 0], [1, 0, 1 - k], [-1, 0, k]])
        }
        MatrixKind::B(k) => {
            let k = nonzero(k)?;
            Mat3::from_i64([[0, 1, k - 1], [1, 0, 0], [0, 1, k]])
        }
        MatrixKind::U => Mat3::from_i64([[0, 1, 0], [1, 0, 0], [0, 0, -1]]),
        MatrixKind::A1Pow(r) => {
            if r == 0 {
                return Err(NumError::ZeroPower);
            }
            let l = r.div_ceil(2) as i64;
            if r % 2 == 1 {
                Mat3::from_i64([[0, 1, 0], [1, 0, 0], [l - 1, l, 1]])
            } else {
                Mat3::from_i64([[1, 0, 0], [0, 1, 0], [l, l, 1]])
            }
        }
    })
}

/// Convenience for A_k with k ≥ 1.
pub fn a_mat(k: u64) -> Mat3 {
    make_matrix(MatrixKind::A(k)).expect("k >= 1")
}

/// Convenience for B_k with k ≥ 1.
pub fn b_mat(k: u64) -> Mat3 {
    make_matrix(MatrixKind::B(k)).expect("k >= 1")
}

/// Left-to-right product in the given order.
pub fn mat_product(ms: &[Mat3]) -> Result<Mat3, NumError> {
    let (first, rest) = ms.split_first().ok_or(NumError::EmptyProduct)?;
    Ok(rest.iter().fold(first.clone(), |acc, m| &acc * m))
}

/// A_{k_1}⋯A_{k_n}.
pub fn a_product(ks: &[u64]) -> Mat3 {
    ks.iter().fold(Mat3::identity(), |acc, &k| &acc * &a_mat(k))
}

/// B_{k_n}⋯B_{k_1} (reverse order of the indices).
pub fn b_product_rev(ks: &[u64]) -> Mat3 {
    ks.iter().fold(Mat3::identity(), |acc, &k| &b_mat(k) * &acc)
}

/// Closed form of the telescoped block B_a·B_1^{2r}·B_b·B_c.
pub fn b_tilde(a: u64, b: u64, c: u64, r: u64) -> Result<Mat3, NumError> {
    if a == 0 || b == 0 || c == 0 {
        return Err(NumError::ZeroIndex);
    }
    let [a, b, c, r] = [a, b, c, r].map(IBig::from);
    let one = IBig::ONE;
    let r1 = &r + &one;
    let top = (&a - &one) * &b * &r1 + &one;
    let bottom = &a * &b * &r1 + &one;
    Ok(Mat3 {
        e: [
            [(&a - &one) * &r1, top.clone(), &c * &top - (&r * (&a - &one) + &one)],
            [one.clone(), &b - &one, &c * (&b - &one)],
            [&a * &r1, bottom.clone(), &c * &bottom - (&r * &a + &one)],
        ],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixInvariants {
    #[serde(serialize_with = "crate::ser_ibig")]
    pub det: IBig,
    pub charpoly: Cubic,
    #[serde(serialize_with = "crate::ser_rationals")]
    pub rational_roots: Vec<dashu::rational::RBig>,
    pub irreducible_over_q: bool,
}

pub fn matrix_invariants(m: &Mat3) -> Result<MatrixInvariants, NumError> {
    let charpoly = m.charpoly();
    let rational_roots = charpoly.rational_roots()?;
    Ok(MatrixInvariants {
        det: m.det(),
        irreducible_over_q: rational_roots.is_empty(),
        rational_roots,
        charpoly,
    })
}
