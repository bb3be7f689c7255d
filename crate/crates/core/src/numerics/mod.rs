//! High-precision evaluation of gamma functions, unit-argument
//! hypergeometric series, and the `L` function through its three
//! representations.

pub mod bernoulli;
pub mod contour;
pub mod gamma;
pub mod lfun;
pub mod series;
pub mod zeta;

pub use contour::{barnes_first_lemma, barnes_integral, barnes_second_sides, eval_L_barnes};
pub use gamma::{complex_gamma, pochhammer, reciprocal_gamma};
pub use lfun::{eval_L_7F6, eval_L_series};
pub use series::hyp_series_unit;

use rug::ops::CompleteRound;
use rug::Complex;

use crate::mp::{self, abs_f64};
use crate::{Error, Result};

/// A point (a,b,c,d,e,f,g) on the hyperplane e+f+g-a-b-c-d = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPoint {
    coords: [Complex; 7],
}

impl ParameterPoint {
    /// Build from (a,b,c,d,f,g), deriving e = 1+a+b+c+d-f-g exactly.
    pub fn from_six(six: &[Complex; 6]) -> ParameterPoint {
        let prec = six[0].prec();
        let [a, b, c, d, f, g] = six.clone();
        let mut e = Complex::with_val(prec, (1, 0));
        e += &a;
        e += &b;
        e += &c;
        e += &d;
        e -= &f;
        e -= &g;
        ParameterPoint {
            coords: [a, b, c, d, e, f, g],
        }
    }

    /// Validate a full 7-tuple against the hyperplane constraint, then
    /// re-derive e from the other six so the constraint holds exactly at
    /// working precision.
    pub fn from_seven(coords: [Complex; 7]) -> Result<ParameterPoint> {
        let prec = coords[0].prec();
        let mut viol = Complex::with_val(prec, (-1, 0));
        for (i, z) in coords.iter().enumerate() {
            if i < 4 {
                viol -= z;
            } else {
                viol += z;
            }
        }
        let v = abs_f64(&viol);
        if v > 1e-10 {
            return Err(Error::ConstraintViolation(v));
        }
        let [a, b, c, d, _, f, g] = coords;
        Ok(ParameterPoint::from_six(&[a, b, c, d, f, g]))
    }

    /// Build from f64 parts of (a,b,c,d,f,g) at `prec` bits.
    pub fn from_six_f64(prec: u32, six: [(f64, f64); 6]) -> ParameterPoint {
        let cx = six.map(|(re, im)| Complex::with_val(prec, (re, im)));
        ParameterPoint::from_six(&cx)
    }

    pub fn coords(&self) -> &[Complex; 7] {
        &self.coords
    }

    pub fn prec(&self) -> (u32, u32) {
        self.coords[0].prec()
    }

    pub fn a(&self) -> &Complex {
        &self.coords[0]
    }
    pub fn b(&self) -> &Complex {
        &self.coords[1]
    }
    pub fn c(&self) -> &Complex {
        &self.coords[2]
    }
    pub fn d(&self) -> &Complex {
        &self.coords[3]
    }
    pub fn e(&self) -> &Complex {
        &self.coords[4]
    }
    pub fn f(&self) -> &Complex {
        &self.coords[5]
    }
    pub fn g(&self) -> &Complex {
        &self.coords[6]
    }

    /// Apply an integer matrix preserving the constraint functional.
    /// Multiplication is exact, so the image stays on the hyperplane.
    pub fn transform(&self, matrix: &[[i64; 7]; 7]) -> ParameterPoint {
        let prec = self.coords[0].prec();
        let coords = std::array::from_fn(|i| {
            let mut acc = Complex::with_val(prec, (0, 0));
            for (j, x) in self.coords.iter().enumerate() {
                let m = matrix[i][j];
                if m != 0 {
                    acc += (x * m as i32).complete(prec);
                }
            }
            acc
        });
        ParameterPoint { coords }
    }

    /// Distance from any coordinate-dependent form to its nearest pole is a
    /// caller concern; this only reports the constraint residual.
    pub fn constraint_residual(&self) -> f64 {
        let prec = self.coords[0].prec();
        let mut viol = Complex::with_val(prec, (-1, 0));
        for (i, z) in self.coords.iter().enumerate() {
            if i < 4 {
                viol -= z;
            } else {
                viol += z;
            }
        }
        abs_f64(&viol)
    }

    /// f64 snapshot of the coordinates, for reports.
    pub fn to_f64(&self) -> [(f64, f64); 7] {
        std::array::from_fn(|i| mp::to_f64_pair(&self.coords[i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::cx;

    const X0: [(f64, f64); 6] = [
        (0.5, 0.0),
        (0.6, 0.0),
        (0.7, 0.0),
        (0.8, 0.0),
        (1.3, 0.0),
        (1.4, 0.0),
    ];

    #[test]
    fn derived_e_satisfies_constraint() {
        let x = ParameterPoint::from_six_f64(192, X0);
        assert_eq!(x.constraint_residual(), 0.0);
        assert!((x.e().real().to_f64() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn seven_tuple_validation() {
        let p = 192;
        let good = ParameterPoint::from_seven(std::array::from_fn(|i| {
            let v = [0.5, 0.6, 0.7, 0.8, 0.9, 1.3, 1.4][i];
            cx(p, v, 0.0)
        }));
        assert!(good.is_ok());
        let bad = ParameterPoint::from_seven(std::array::from_fn(|i| {
            let v = [0.5, 0.6, 0.7, 0.8, 1.1, 1.3, 1.4][i];
            cx(p, v, 0.0)
        }));
        assert!(matches!(bad, Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn identity_transform_is_noop() {
        let x = ParameterPoint::from_six_f64(192, X0);
        let mut id = [[0i64; 7]; 7];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = 1;
        }
        assert_eq!(x.transform(&id), x);
    }

    #[test]
    fn constraint_preserved_by_constraint_preserving_matrix() {
        // the fundamental involution: rows per its defining matrix
        let a_mat: [[i64; 7]; 7] = [
            [1, 0, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0, 0],
            [0, 0, -1, 0, 0, 0, 1],
            [0, 0, 0, -1, 0, 0, 1],
            [0, 0, -1, -1, 1, 0, 1],
            [0, 0, -1, -1, 0, 1, 1],
            [0, 0, 0, 0, 0, 0, 1],
        ];
        let x = ParameterPoint::from_six_f64(192, X0);
        let y = x.transform(&a_mat);
        assert_eq!(y.constraint_residual(), 0.0);
        // row 5 of the matrix realizes 1+a+b-f through the constraint
        let expect_e = 1.0 + 0.5 + 0.6 - 1.3;
        assert!((y.e().real().to_f64() - expect_e).abs() < 1e-15);
        assert_eq!(y.transform(&a_mat), x);
    }
}
