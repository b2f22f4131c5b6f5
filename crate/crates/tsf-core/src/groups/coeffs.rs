//! Even trigonometric coefficient functions of a rotation angle θ, written as
//! functions of q = θ² so that both the values and their q-derivatives stay
//! accurate down to θ = 0. Below `SERIES_LIMIT` they are evaluated from their
//! Maclaurin series in q; above it from the trigonometric expressions.

#[allow(unused_imports)]
use num_traits::Float;

const SERIES_LIMIT: f64 = 1.0;
const TERMS: usize = 13;

const fn inv_factorials<const K: usize>() -> [f64; K] {
    let mut out = [1.0; K];
    let mut k = 2;
    while k < K {
        out[k] = out[k - 1] / k as f64;
        k += 1;
    }
    out
}

const INV_FACT: [f64; 2 * TERMS + 6] = inv_factorials();

const fn sign(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Maclaurin coefficients in q of each family member, in [`Coeffs`] order
/// after `q`.
const fn tables() -> [[f64; TERMS]; 6] {
    let f = INV_FACT;
    let mut t = [[0.0; TERMS]; 6];
    let mut j = 0;
    while j < TERMS {
        let s = sign(j);
        t[0][j] = s * f[2 * j + 1];
        t[1][j] = s * f[2 * j + 2];
        t[2][j] = s * f[2 * j + 3];
        t[3][j] = -s * (f[2 * j + 2] - f[2 * j + 3]);
        t[4][j] = s * (f[2 * j + 4] - 3.0 * f[2 * j + 5]);
        t[5][j] = -s * (f[2 * j + 3] - 2.0 * f[2 * j + 4]);
        j += 1;
    }
    t
}

const TABLES: [[f64; TERMS]; 6] = tables();

fn value(q: f64, c: &[f64; TERMS]) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * q + a)
}

fn deriv(q: f64, c: &[f64; TERMS]) -> f64 {
    (1..TERMS).rev().fold(0.0, |acc, j| acc * q + j as f64 * c[j])
}

/// Values (and q-derivatives) of the coefficient family at one angle.
#[derive(Debug, Clone, Copy)]
pub struct Coeffs {
    pub q: f64,
    /// sin θ / θ
    pub sinc: f64,
    /// (1 − cos θ) / θ²
    pub cosc: f64,
    /// (1 − sin θ/θ) / θ²
    pub a1: f64,
    /// (cos θ − sin θ/θ) / θ²
    pub f1: f64,
    /// (2 + cos θ − 3 sin θ/θ) / θ⁴
    pub f2: f64,
    /// (sin θ/θ − 2(1 − cos θ)/θ²) / θ²
    pub f3: f64,
}

/// q-derivatives of the entries of [`Coeffs`].
#[derive(Debug, Clone, Copy)]
pub struct CoeffDerivs {
    pub sinc: f64,
    pub cosc: f64,
    pub a1: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

impl Coeffs {
    pub fn new(q: f64) -> Self {
        if q < SERIES_LIMIT {
            Self {
                q,
                sinc: value(q, &TABLES[0]),
                cosc: value(q, &TABLES[1]),
                a1: value(q, &TABLES[2]),
                f1: value(q, &TABLES[3]),
                f2: value(q, &TABLES[4]),
                f3: value(q, &TABLES[5]),
            }
        } else {
            let th = q.sqrt();
            let (s, c) = th.sin_cos();
            let sinc = s / th;
            let cosc = (1.0 - c) / q;
            Self {
                q,
                sinc,
                cosc,
                a1: (1.0 - sinc) / q,
                f1: (c - sinc) / q,
                f2: (2.0 + c - 3.0 * sinc) / (q * q),
                f3: (sinc - 2.0 * cosc) / q,
            }
        }
    }

    pub fn derivs(&self) -> CoeffDerivs {
        let q = self.q;
        if q < SERIES_LIMIT {
            CoeffDerivs {
                sinc: 0.5 * self.f1,
                cosc: 0.5 * self.f3,
                a1: deriv(q, &TABLES[2]),
                f1: deriv(q, &TABLES[3]),
                f2: deriv(q, &TABLES[4]),
                f3: deriv(q, &TABLES[5]),
            }
        } else {
            let g = self.sinc + 3.0 * self.f1;
            CoeffDerivs {
                sinc: 0.5 * self.f1,
                cosc: 0.5 * self.f3,
                a1: -(0.5 * self.f1 + self.a1) / q,
                f1: -g / (2.0 * q),
                f2: -g / (2.0 * q * q) - 2.0 * self.f2 / q,
                f3: (0.5 * self.f1 - 2.0 * self.f3) / q,
            }
        }
    }
}

/// (1 − (θ/2)cot(θ/2)) / θ², the quadratic coefficient of the inverse
/// so(3) Jacobian. Singular at θ = 2π.
pub fn half_cot_coeff(q: f64) -> f64 {
    if q < 0.25 {
        // |B_2n| / (2n)! for n = 1..7
        const C: [f64; 7] = [
            1.0 / 12.0,
            1.0 / 720.0,
            1.0 / 30240.0,
            1.0 / 1209600.0,
            1.0 / 47900160.0,
            691.0 / 1307674368000.0,
            1.0 / 74724249600.0,
        ];
        C.iter().rev().fold(0.0, |acc, c| acc * q + c)
    } else {
        let half = 0.5 * q.sqrt();
        (1.0 - half / half.tan()) / q
    }
}
