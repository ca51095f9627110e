//! Named numerical checks and the tolerance policy.

use alloc::string::String;

/// One comparison `lhs ≈ rhs` (or `lhs ≤ rhs` for inequalities) with its
/// measured deviation.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub deviation: f64,
}

impl Check {
    /// `|lhs − rhs| ≤ tol`.
    pub fn absolute(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let deviation = (lhs - rhs).abs();
        Check { name: name.into(), passed: deviation <= tol, lhs, rhs, tolerance: tol, deviation }
    }

    /// `|lhs − rhs| ≤ tol · max(1, |rhs|)`; the reported deviation is the
    /// scaled one.
    pub fn relative(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let deviation = (lhs - rhs).abs() / rhs.abs().max(1.0);
        Check { name: name.into(), passed: deviation <= tol, lhs, rhs, tolerance: tol, deviation }
    }

    /// `|lhs − rhs| ≤ tol · max(1, scale)`.
    pub fn scaled(name: impl Into<String>, lhs: f64, rhs: f64, scale: f64, tol: f64) -> Self {
        let deviation = (lhs - rhs).abs() / scale.abs().max(1.0);
        Check { name: name.into(), passed: deviation <= tol, lhs, rhs, tolerance: tol, deviation }
    }

    /// `lhs ≤ rhs + tol`; deviation is the violation (zero when satisfied).
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let deviation = (lhs - rhs).max(0.0);
        Check { name: name.into(), passed: lhs <= rhs + tol, lhs, rhs, tolerance: tol, deviation }
    }

    /// A residual that must be at most `tol`; `rhs` is reported as zero.
    pub fn residual(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            passed: residual <= tol,
            lhs: residual,
            rhs: 0.0,
            tolerance: tol,
            deviation: residual,
        }
    }

    /// A boolean predicate; `lhs` is 1 when it holds.
    pub fn predicate(name: impl Into<String>, holds: bool, measured: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            passed: holds,
            lhs: if holds { 1.0 } else { 0.0 },
            rhs: 1.0,
            tolerance: tol,
            deviation: measured,
        }
    }
}

/// Tolerances used across the engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// Unitarity and exact algebraic identities.
    pub algebraic: f64,
    /// Span equalities, containments and trace properties.
    pub span: f64,
    /// Center-valued dimensions and bounded-vector inequalities.
    pub dimension: f64,
    /// Spectral comparisons such as Bessel bounds (relative).
    pub spectral: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { algebraic: 1e-12, span: 1e-10, dimension: 1e-9, spectral: 1e-8 }
    }
}

impl Tolerance {
    /// Every check uses the same tolerance.
    pub fn uniform(tol: f64) -> Self {
        Tolerance { algebraic: tol, span: tol, dimension: tol, spectral: tol }
    }
}
