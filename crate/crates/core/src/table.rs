//! Dense real-valued functions on a categorical domain.

use crate::domain::{advance, CategoricalDomain, VariableSubset};
use crate::error::{Error, Result};
use crate::scalar::{abs, Scalar};

/// A function `f: X → T` stored densely in flat-index order.
#[derive(Clone, Debug, PartialEq)]
pub struct TabularFunction<T> {
    domain: CategoricalDomain,
    values: Vec<T>,
}

impl<T: Scalar> TabularFunction<T> {
    /// Checks length and finiteness.
    pub fn new(domain: CategoricalDomain, values: Vec<T>) -> Result<Self> {
        if values.len() != domain.size() {
            return Err(Error::Dimension {
                expected: domain.size(),
                got: values.len(),
            });
        }
        if let Some(cell) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::NonFinite(cell));
        }
        Ok(TabularFunction { domain, values })
    }

    pub fn from_fn(domain: CategoricalDomain, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let mut values = Vec::with_capacity(domain.size());
        domain.for_each_cell(|_, x| values.push(f(x)));
        TabularFunction { domain, values }
    }

    pub fn zeros(domain: CategoricalDomain) -> Self {
        Self::constant(domain, T::zero())
    }

    pub fn constant(domain: CategoricalDomain, c: T) -> Self {
        let values = vec![c; domain.size()];
        TabularFunction { domain, values }
    }

    pub fn domain(&self) -> &CategoricalDomain {
        &self.domain
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn get(&self, x: &[usize]) -> Result<&T> {
        Ok(&self.values[self.domain.flat_index(x)?])
    }

    pub fn at(&self, index: usize) -> &T {
        &self.values[index]
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> TabularFunction<U> {
        TabularFunction {
            domain: self.domain.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if !self.domain.same_shape(&other.domain) {
            return Err(Error::Domain(format!(
                "shape {:?} does not match {:?}",
                self.domain.cardinalities(),
                other.domain.cardinalities()
            )));
        }
        Ok(())
    }

    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(&T, &T) -> T) -> Result<Self> {
        self.check_same(other)?;
        Ok(TabularFunction {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, alpha: &T) -> Self {
        self.map(|v| alpha.clone() * v.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    /// `max |f(x)|`, zero for an empty table.
    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |m, v| T::max_of(m, abs(v)))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Cell-wise equality within an absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: &T) -> bool {
        self.domain.same_shape(&other.domain)
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| abs(&(a.clone() - b.clone())) <= *tol)
    }

    /// Lifts `marginal`, a table over `X_A`, to the full domain:
    /// `g(x) = marginal(x_A)`.
    pub fn broadcast(
        marginal: &TabularFunction<T>,
        a: &VariableSubset,
        domain: &CategoricalDomain,
    ) -> Result<Self> {
        let expected = domain.marginal(a)?;
        if !expected.same_shape(marginal.domain()) {
            return Err(Error::Domain(format!(
                "marginal table shape {:?} does not match subset {a} of {:?}",
                marginal.domain().cardinalities(),
                domain.cardinalities()
            )));
        }
        let mdom = marginal.domain();
        Ok(Self::from_fn(domain.clone(), |x| {
            marginal.values[domain.project_index(x, a, mdom)].clone()
        }))
    }

    /// Sums out every variable outside `a`, giving a table over `X_A`.
    pub fn sum_to(&self, a: &VariableSubset) -> Result<TabularFunction<T>> {
        let mdom = self.domain.marginal(a)?;
        let mut out = vec![T::zero(); mdom.size()];
        self.domain.for_each_cell(|idx, x| {
            let j = self.domain.project_index(x, a, &mdom);
            out[j] = out[j].clone() + self.values[idx].clone();
        });
        Ok(TabularFunction {
            domain: mdom,
            values: out,
        })
    }

    /// Restricts the table to the slice `x_{-A} = context`, giving a table
    /// over `X_A`. `context` lists the values of the complement of `a` in
    /// increasing variable order.
    pub fn slice(&self, a: &VariableSubset, context: &[usize]) -> Result<TabularFunction<T>> {
        let rest = a.complement(self.domain.n());
        let base = self.partial_offset(&rest, context)?;
        let mdom = self.domain.marginal(a)?;
        let strides = self.domain.strides();
        Ok(TabularFunction::from_fn(mdom, |xa| {
            let off: usize = a.iter().zip(xa).map(|(i, v)| v * strides[i]).sum();
            self.values[base + off].clone()
        }))
    }

    fn partial_offset(&self, a: &VariableSubset, xa: &[usize]) -> Result<usize> {
        self.domain.check_subset(a)?;
        if xa.len() != a.len() {
            return Err(Error::Dimension {
                expected: a.len(),
                got: xa.len(),
            });
        }
        let mut off = 0;
        for (i, &v) in a.iter().zip(xa) {
            let c = self.domain.cardinality(i);
            if v >= c {
                return Err(Error::Index {
                    variable: i,
                    value: v,
                    cardinality: c,
                });
            }
            off += v * self.domain.strides()[i];
        }
        Ok(off)
    }
}

/// `g(x) = f(x0_A, x_{-A})`. `x0_a` lists one category per member of `a`,
/// in subset order.
pub fn substitute<T: Scalar>(
    f: &TabularFunction<T>,
    a: &VariableSubset,
    x0_a: &[usize],
) -> Result<TabularFunction<T>> {
    let shift = f.partial_offset(a, x0_a)?;
    let domain = f.domain();
    let strides = domain.strides();
    let mut values = Vec::with_capacity(domain.size());
    domain.for_each_cell(|idx, x| {
        let drop: usize = a.iter().map(|i| x[i] * strides[i]).sum();
        values.push(f.values[idx - drop + shift].clone());
    });
    Ok(TabularFunction {
        domain: domain.clone(),
        values,
    })
}

/// Whether `f` depends only on the variables in `a`: every pair of cells
/// agreeing on `x_A` differs by at most `tol`.
pub fn depends_only_on<T: Scalar>(
    f: &TabularFunction<T>,
    a: &VariableSubset,
    tol: &T,
) -> Result<bool> {
    let domain = f.domain();
    domain.check_subset(a)?;
    let rest = a.complement(domain.n());
    let rest_cards: Vec<usize> = rest.iter().map(|i| domain.cardinality(i)).collect();
    let strides = domain.strides();
    let adom = domain.marginal(a)?;
    // For each x_A, the spread max - min over the fibre x_{-A}.
    let mut ok = true;
    adom.for_each_cell(|_, xa| {
        if !ok {
            return;
        }
        let base: usize = a.iter().zip(xa).map(|(i, v)| v * strides[i]).sum();
        let mut xr = vec![0usize; rest.len()];
        let first = f.values[base].clone();
        let (mut lo, mut hi) = (first.clone(), first);
        loop {
            let off: usize = rest.iter().zip(&xr).map(|(i, v)| v * strides[i]).sum();
            let v = &f.values[base + off];
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
            if !advance(&mut xr, &rest_cards) {
                break;
            }
        }
        if hi - lo > *tol {
            ok = false;
        }
    });
    Ok(ok)
}
