//! First- and second-order categorical difference operators.
//!
//! `Δ_A f(x) = f(x) - f(x⁰_A, x_{-A})`. Whether a difference vanishes
//! identically does not depend on the centre `x⁰`, so downstream predicates
//! use the all-zero base point unless told otherwise.

use crate::domain::{Assignment, CategoricalDomain, VariableSubset};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::table::{substitute, TabularFunction};

/// Centre of a difference operator: a full assignment whose coordinates
/// in `A` are substituted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePoint(Assignment);

impl BasePoint {
    pub fn new(domain: &CategoricalDomain, values: Vec<usize>) -> Result<Self> {
        domain.check_assignment(&values)?;
        Ok(BasePoint(Assignment::new(values)))
    }

    /// All-zero base point.
    pub fn origin(domain: &CategoricalDomain) -> Self {
        BasePoint(Assignment::zeros(domain.n()))
    }

    pub fn assignment(&self) -> &Assignment {
        &self.0
    }

    pub fn values(&self) -> &[usize] {
        self.0.values()
    }

    pub(crate) fn check(&self, domain: &CategoricalDomain) -> Result<()> {
        domain.check_assignment(self.values())
    }
}

fn substitute_at<T: Scalar>(
    f: &TabularFunction<T>,
    a: &VariableSubset,
    x0: &BasePoint,
) -> Result<TabularFunction<T>> {
    substitute(f, a, &x0.assignment().project(a))
}

fn validate<T: Scalar>(
    f: &TabularFunction<T>,
    subsets: &[&VariableSubset],
    x0: &BasePoint,
) -> Result<()> {
    for a in subsets {
        f.domain().check_subset(a)?;
    }
    x0.check(f.domain())
}

/// `Δ_A f`, centred at `x0`. Vanishes on the slice `x_A = x0_A`.
pub fn first_difference<T: Scalar>(
    f: &TabularFunction<T>,
    a: &VariableSubset,
    x0: &BasePoint,
) -> Result<TabularFunction<T>> {
    validate(f, &[a], x0)?;
    f.sub(&substitute_at(f, a, x0)?)
}

/// `Δ_A Δ_B f` via the closed form
/// `f(x) + f(x⁰_{A∪B}, x_{-(A∪B)}) - f(x⁰_A, x_{-A}) - f(x⁰_B, x_{-B})`.
///
/// Overlapping `A` and `B` are fine; `Δ_A Δ_A f = Δ_A f`.
pub fn second_difference<T: Scalar>(
    f: &TabularFunction<T>,
    a: &VariableSubset,
    b: &VariableSubset,
    x0: &BasePoint,
) -> Result<TabularFunction<T>> {
    validate(f, &[a, b], x0)?;
    let fab = substitute_at(f, &a.union(b), x0)?;
    let fa = substitute_at(f, a, x0)?;
    let fb = substitute_at(f, b, x0)?;
    let values = f
        .values()
        .iter()
        .zip(fab.values())
        .zip(fa.values().iter().zip(fb.values()))
        .map(|((v, vab), (va, vb))| v.clone() + vab.clone() - va.clone() - vb.clone())
        .collect();
    TabularFunction::new(f.domain().clone(), values)
}

/// `max |f(x)| <= tol`.
pub fn is_zero<T: Scalar>(f: &TabularFunction<T>, tol: &T) -> bool {
    f.max_abs() <= *tol
}

/// Re-centring identity `Δ^{x1}_A f - Δ^{x0}_A f = Δ^{x1}_A f(x0_A, x_{-A})`.
///
/// Returns the left-hand side after checking it against the right-hand side
/// within the scalar's default tolerance. A mismatch is reported as
/// [`Error::Inconsistent`].
pub fn recenter_correction<T: Scalar>(
    f: &TabularFunction<T>,
    a: &VariableSubset,
    x0: &BasePoint,
    x1: &BasePoint,
) -> Result<TabularFunction<T>> {
    validate(f, &[a], x0)?;
    x1.check(f.domain())?;
    let d1 = first_difference(f, a, x1)?;
    let d0 = first_difference(f, a, x0)?;
    let lhs = d1.sub(&d0)?;
    let rhs = substitute_at(&d1, a, x0)?;
    if !lhs.approx_eq(&rhs, &T::default_tolerance()) {
        return Err(Error::Inconsistent(format!(
            "re-centring identity fails for subset {a} (max deviation {:?})",
            lhs.max_abs_diff(&rhs)?
        )));
    }
    Ok(lhs)
}
