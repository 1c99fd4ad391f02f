// SPDX-License-Identifier: Apache-2.0

//! Exact 2x2 unitary check of the single-wire value tables.
//!
//! Every amplitude involved lies in {0, 1, (1+i)/2, (1-i)/2}, so the check
//! runs over Gaussian rationals with no rounding.

use num_complex::Complex;
use num_rational::Rational64;

use super::value::{value_map, QValue, ValueOp};

pub type Exact = Complex<Rational64>;
pub type Matrix2 = [[Exact; 2]; 2];
pub type Vector2 = [Exact; 2];

fn c(re: (i64, i64), im: (i64, i64)) -> Exact {
    Complex::new(Rational64::new(re.0, re.1), Rational64::new(im.0, im.1))
}

fn zero() -> Exact {
    c((0, 1), (0, 1))
}

fn one() -> Exact {
    c((1, 1), (0, 1))
}

pub fn identity_matrix() -> Matrix2 {
    [[one(), zero()], [zero(), one()]]
}

pub fn pauli_x() -> Matrix2 {
    [[zero(), one()], [one(), zero()]]
}

/// `V = 1/2 [[1+i, 1-i], [1-i, 1+i]]`, the square root of X.
pub fn sqrt_not() -> Matrix2 {
    let p = c((1, 2), (1, 2));
    let m = c((1, 2), (-1, 2));
    [[p, m], [m, p]]
}

pub fn conjugate_transpose(m: &Matrix2) -> Matrix2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

pub fn mat_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[zero(), zero()], [zero(), zero()]];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat_vec(m: &Matrix2, v: &Vector2) -> Vector2 {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

pub fn matrix_for(op: ValueOp) -> Matrix2 {
    match op {
        ValueOp::Not => pauli_x(),
        ValueOp::V => sqrt_not(),
        ValueOp::Vdag => conjugate_transpose(&sqrt_not()),
    }
}

/// State vector of a symbolic value: `|0>`, `|1>`, `V|0>`, `V|1>`.
pub fn state_vector(v: QValue) -> Vector2 {
    let basis0 = [one(), zero()];
    let basis1 = [zero(), one()];
    match v {
        QValue::B0 => basis0,
        QValue::B1 => basis1,
        QValue::V0 => mat_vec(&sqrt_not(), &basis0),
        QValue::V1 => mat_vec(&sqrt_not(), &basis1),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub checked: usize,
    pub mismatches: Vec<(ValueOp, QValue)>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn merge(&mut self, other: OracleReport) {
        self.checked += other.checked;
        self.mismatches.extend(other.mismatches);
    }
}

/// Checks `matrix * |v> == |value_map(op, v)>` for all four values.
pub fn check_value_table(op: ValueOp, matrix: &Matrix2) -> OracleReport {
    let mut report = OracleReport::default();
    for v in QValue::ALL {
        report.checked += 1;
        if mat_vec(matrix, &state_vector(v)) != state_vector(value_map(op, v)) {
            report.mismatches.push((op, v));
        }
    }
    report
}

/// Validates all three value tables against their unitaries (12 checks).
pub fn unitary_value_oracle() -> OracleReport {
    let mut report = OracleReport::default();
    for op in ValueOp::ALL {
        report.merge(check_value_table(op, &matrix_for(op)));
    }
    report
}
