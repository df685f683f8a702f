use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::shaping::Symbol4D;

/// Data-aided phase estimate `arg sum(y conj(x))` per polarization.
pub fn mean_phase_estimate(received: &[Symbol4D], reference: &[Symbol4D]) -> Result<(f64, f64)> {
    if received.len() != reference.len() {
        return Err(Error::LengthMismatch {
            what: "phase reference",
            expected: received.len(),
            actual: reference.len(),
        });
    }
    let (mut cx, mut cy) = (Complex64::default(), Complex64::default());
    for (r, t) in received.iter().zip(reference) {
        cx += r.x * t.x.conj();
        cy += r.y * t.y.conj();
    }
    if cx.norm() == 0.0 || cy.norm() == 0.0 {
        return Err(Error::Degenerate("zero correlation in phase estimate".into()));
    }
    Ok((cx.arg(), cy.arg()))
}

/// Removes the mean phase rotation of each polarization.
pub fn mean_phase_comp(received: &[Symbol4D], reference: &[Symbol4D]) -> Result<Vec<Symbol4D>> {
    let (tx, ty) = mean_phase_estimate(received, reference)?;
    let (rx, ry) = (Complex64::from_polar(1.0, -tx), Complex64::from_polar(1.0, -ty));
    Ok(received.iter().map(|s| Symbol4D::new(s.x * rx, s.y * ry)).collect())
}
