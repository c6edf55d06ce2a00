//! Generative binary classifiers stored as joint tables over `X × {-1, +1}`.

use crate::diff::{second_difference, BasePoint};
use crate::domain::{advance, CategoricalDomain, VariableSubset};
use crate::error::{Error, Result};
use crate::factorization::pairwise_second_differences;
use crate::graph::UndirectedGraph;
use crate::scalar::Real;
use crate::table::TabularFunction;

/// Class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Negative,
    Positive,
}

impl Class {
    /// `-1` or `+1`.
    pub fn sign(self) -> i8 {
        match self {
            Class::Negative => -1,
            Class::Positive => 1,
        }
    }

    pub fn from_sign(s: i8) -> Result<Self> {
        match s {
            1 => Ok(Class::Positive),
            -1 => Ok(Class::Negative),
            _ => Err(Error::Format(format!("class must be +1 or -1, got {s}"))),
        }
    }
}

/// Joint distribution `p(x, c)`.
///
/// [`new`](Self::new) requires strict positivity. The marginally extended
/// variant built by [`new_extended`](Self::new_extended) allows zero cells,
/// which arise as limits of iterative fitting.
#[derive(Clone, Debug, PartialEq)]
pub struct GenerativeClassifier<T> {
    p_plus: TabularFunction<T>,
    p_minus: TabularFunction<T>,
}

impl<T: Real> GenerativeClassifier<T> {
    pub fn new(p_plus: TabularFunction<T>, p_minus: TabularFunction<T>) -> Result<Self> {
        let p = Self::new_extended(p_plus, p_minus)?;
        p.require_positive()?;
        Ok(p)
    }

    /// Entries must be `>= 0` and sum to one.
    pub fn new_extended(p_plus: TabularFunction<T>, p_minus: TabularFunction<T>) -> Result<Self> {
        if !p_plus.domain().same_shape(p_minus.domain()) {
            return Err(Error::Domain(
                "p_plus and p_minus have different shapes".into(),
            ));
        }
        let size = p_plus.domain().size();
        if let Some(cell) = p_plus
            .values()
            .iter()
            .chain(p_minus.values())
            .position(|v| *v < T::zero())
        {
            return Err(Error::Positivity { cell: cell % size });
        }
        let p = GenerativeClassifier { p_plus, p_minus };
        let total = p.total();
        if (total - T::one()).abs() > T::normalization_tolerance(2 * size) {
            return Err(Error::Normalization(total.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(p)
    }

    /// Normalizes two non-negative tables of unnormalized weights.
    pub fn from_weights(w_plus: TabularFunction<T>, w_minus: TabularFunction<T>) -> Result<Self> {
        let total = w_plus
            .values()
            .iter()
            .chain(w_minus.values())
            .fold(T::zero(), |a, &b| a + b);
        if !(total > T::zero()) {
            return Err(Error::Normalization(total.to_f64().unwrap_or(f64::NAN)));
        }
        Self::new_extended(w_plus.map(|&v| v / total), w_minus.map(|&v| v / total))
    }

    /// Builds `p(x, c) ∝ exp(log_weight(x, c))`, shifting by the maximum
    /// before exponentiation so large log-weights do not overflow.
    pub fn from_log_weights(
        log_plus: &TabularFunction<T>,
        log_minus: &TabularFunction<T>,
    ) -> Result<Self> {
        let shift = log_plus
            .values()
            .iter()
            .chain(log_minus.values())
            .fold(T::neg_infinity(), |m, &v| m.max(v));
        Self::from_weights(
            log_plus.map(|&v| (v - shift).exp()),
            log_minus.map(|&v| (v - shift).exp()),
        )
    }

    pub fn domain(&self) -> &CategoricalDomain {
        self.p_plus.domain()
    }

    pub fn p_plus(&self) -> &TabularFunction<T> {
        &self.p_plus
    }

    pub fn p_minus(&self) -> &TabularFunction<T> {
        &self.p_minus
    }

    pub fn density(&self, class: Class) -> &TabularFunction<T> {
        match class {
            Class::Positive => &self.p_plus,
            Class::Negative => &self.p_minus,
        }
    }

    /// `p(x, c)`.
    pub fn prob(&self, x: &[usize], class: Class) -> Result<T> {
        self.density(class).get(x).copied()
    }

    pub fn total(&self) -> T {
        self.p_plus
            .values()
            .iter()
            .chain(self.p_minus.values())
            .fold(T::zero(), |a, &b| a + b)
    }

    /// Whether every cell of both class tables is strictly positive.
    pub fn is_strictly_positive(&self) -> bool {
        self.zero_cell().is_none()
    }

    fn zero_cell(&self) -> Option<usize> {
        let size = self.domain().size();
        self.p_plus
            .values()
            .iter()
            .chain(self.p_minus.values())
            .position(|v| !(*v > T::zero()))
            .map(|c| c % size)
    }

    fn require_positive(&self) -> Result<()> {
        match self.zero_cell() {
            Some(cell) => Err(Error::Positivity { cell }),
            None => Ok(()),
        }
    }

    /// Predictor marginal `P(X = x) = p(x, +1) + p(x, -1)`.
    pub fn predictor_marginal(&self) -> TabularFunction<T> {
        self.p_plus.add(&self.p_minus).expect("same shape")
    }

    /// `P(X_A = x_A)`, summed over the class and the other variables.
    pub fn marginal(&self, a: &VariableSubset) -> Result<TabularFunction<T>> {
        self.predictor_marginal().sum_to(a)
    }

    /// Rescales both class tables cell-wise by `factor(x)`.
    pub(crate) fn rescaled(&self, factor: &[T]) -> Self {
        let scale = |t: &TabularFunction<T>| {
            TabularFunction::new(
                t.domain().clone(),
                t.values()
                    .iter()
                    .zip(factor)
                    .map(|(&v, &s)| v * s)
                    .collect(),
            )
            .expect("products of finite values")
        };
        GenerativeClassifier {
            p_plus: scale(&self.p_plus),
            p_minus: scale(&self.p_minus),
        }
    }

    /// Divides by the total mass, returning the pre-normalization total.
    pub(crate) fn renormalize(&mut self) -> T {
        let total = self.total();
        self.p_plus = self.p_plus.map(|&v| v / total);
        self.p_minus = self.p_minus.map(|&v| v / total);
        total
    }

    /// Per cell, `ln(p(x,+1)/p(x,-1))`, or `None` where both are zero.
    pub fn discrimination_on_support(&self) -> Vec<Option<T>> {
        self.p_plus
            .values()
            .iter()
            .zip(self.p_minus.values())
            .map(|(&a, &b)| (a > T::zero() && b > T::zero()).then(|| (a / b).ln()))
            .collect()
    }
}

/// Induced discrimination function `f_P(x) = ln(p(x,+1) / p(x,-1))`.
pub fn discrimination<T: Real>(p: &GenerativeClassifier<T>) -> Result<TabularFunction<T>> {
    p.require_positive()?;
    p.p_plus.zip_with(&p.p_minus, |&a, &b| (a / b).ln())
}

/// Maximum a-posteriori class; ties go to `+1`.
pub fn decide<T: Real>(p: &GenerativeClassifier<T>, x: &[usize]) -> Result<Class> {
    let plus = p.prob(x, Class::Positive)?;
    let minus = p.prob(x, Class::Negative)?;
    Ok(if plus >= minus {
        Class::Positive
    } else {
        Class::Negative
    })
}

/// Outcome of [`check_ci`].
#[derive(Clone, Debug, PartialEq)]
pub struct CiCheck<T> {
    pub holds: bool,
    /// Largest toric residual `|p p' - p p'|`, relative to the larger of the
    /// two products.
    pub toric_residual: T,
    /// `max_c max_x |Δ_A Δ_B ln p(x, c)|`; `None` when the table has zeros
    /// and only the toric form applies.
    pub differential_residual: Option<T>,
}

impl<T> CiCheck<T> {
    /// Set when zero cells forced a toric-only verdict.
    pub fn toric_only(&self) -> bool {
        self.differential_residual.is_none()
    }
}

/// Largest relative toric residual over all quadruples and both classes.
pub fn toric_residual<T: Real>(
    p: &GenerativeClassifier<T>,
    a: &VariableSubset,
    b: &VariableSubset,
) -> Result<T> {
    let domain = p.domain();
    let n = domain.n();
    let d = a.union(b).complement(n);
    let cards = domain.cardinalities();
    let strides = domain.strides();
    let sub = |s: &VariableSubset| -> (Vec<usize>, Vec<usize>) {
        (
            s.iter().map(|i| cards[i]).collect(),
            s.iter().map(|i| strides[i]).collect(),
        )
    };
    let (a_cards, a_strides) = sub(a);
    let (b_cards, b_strides) = sub(b);
    let (d_cards, d_strides) = sub(&d);
    let offset =
        |xs: &[usize], st: &[usize]| -> usize { xs.iter().zip(st).map(|(v, s)| v * s).sum() };
    let configs = |cards: &[usize]| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut x = vec![0; cards.len()];
        loop {
            out.push(x.clone());
            if !advance(&mut x, cards) {
                return out;
            }
        }
    };
    let a_offsets: Vec<usize> = configs(&a_cards)
        .iter()
        .map(|x| offset(x, &a_strides))
        .collect();
    let b_offsets: Vec<usize> = configs(&b_cards)
        .iter()
        .map(|x| offset(x, &b_strides))
        .collect();

    let mut worst = T::zero();
    let mut xd = vec![0; d.len()];
    loop {
        let base = offset(&xd, &d_strides);
        for table in [&p.p_plus, &p.p_minus] {
            let v = table.values();
            for (ia, &oa) in a_offsets.iter().enumerate() {
                for &oa2 in &a_offsets[ia + 1..] {
                    for (ib, &ob) in b_offsets.iter().enumerate() {
                        for &ob2 in &b_offsets[ib + 1..] {
                            let lhs = v[base + oa + ob] * v[base + oa2 + ob2];
                            let rhs = v[base + oa + ob2] * v[base + oa2 + ob];
                            let scale = lhs.max(rhs);
                            if scale > T::zero() {
                                worst = worst.max((lhs - rhs).abs() / scale);
                            }
                        }
                    }
                }
            }
        }
        if !advance(&mut xd, &d_cards) {
            break;
        }
    }
    Ok(worst)
}

fn check_pair(domain: &CategoricalDomain, a: &VariableSubset, b: &VariableSubset) -> Result<()> {
    domain.check_subset(a)?;
    domain.check_subset(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Subset(
            "conditional independence needs non-empty subsets".into(),
        ));
    }
    if !a.is_disjoint(b) {
        return Err(Error::Subset(format!("{a} and {b} overlap")));
    }
    Ok(())
}

/// Tests `X_A ⫫ X_B | (X_rest, C)` two ways: through the toric equations
/// (relative residual) and, when `p > 0`, through the vanishing of
/// `Δ_A Δ_B ln p(·, c)` (absolute residual). The verdict follows the toric
/// form; if the two forms disagree by more than `tol` the result is an
/// [`Error::Inconsistent`].
pub fn check_ci<T: Real>(
    p: &GenerativeClassifier<T>,
    a: &VariableSubset,
    b: &VariableSubset,
    tol: T,
) -> Result<CiCheck<T>> {
    check_pair(p.domain(), a, b)?;
    let toric = toric_residual(p, a, b)?;
    let holds = toric <= tol;
    let differential = if p.is_strictly_positive() {
        let x0 = BasePoint::origin(p.domain());
        let mut worst = T::zero();
        for class in [Class::Positive, Class::Negative] {
            let log_p = p.density(class).map(|v| v.ln());
            worst = worst.max(second_difference(&log_p, a, b, &x0)?.max_abs());
        }
        Some(worst)
    } else {
        None
    };
    if let Some(diff) = differential {
        if (diff <= tol) != holds && (diff - toric).abs() > tol {
            return Err(Error::Inconsistent(format!(
                "toric residual {toric:?} and differential residual {diff:?} disagree for {a} vs {b}"
            )));
        }
    }
    Ok(CiCheck {
        holds,
        toric_residual: toric,
        differential_residual: differential,
    })
}

/// Non-adjacent pairs `(i, j)` of `g` for which `X_i ⫫ X_j | rest, C` fails.
pub fn markov_ci_violations<T: Real>(
    p: &GenerativeClassifier<T>,
    g: &UndirectedGraph,
    tol: T,
) -> Result<Vec<(usize, usize)>> {
    if g.n() != p.domain().n() {
        return Err(Error::Dimension {
            expected: p.domain().n(),
            got: g.n(),
        });
    }
    let mut out = Vec::new();
    for (i, j) in g.non_adjacent_pairs() {
        let check = check_ci(
            p,
            &VariableSubset::singleton(i),
            &VariableSubset::singleton(j),
            tol,
        )?;
        if !check.holds {
            out.push((i, j));
        }
    }
    Ok(out)
}

/// Pairwise Markov property with respect to `g` (with the class adjacent to
/// every predictor).
pub fn is_g_markov<T: Real>(
    p: &GenerativeClassifier<T>,
    g: &UndirectedGraph,
    tol: T,
) -> Result<bool> {
    Ok(markov_ci_violations(p, g, tol)?.is_empty())
}

/// Tolerance used to assert that construction inputs are Markov.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-9;

/// Classifier with `p(x, c) ∝ exp(g(x) + c f(x) / 2)`; `g` defaults to zero.
///
/// Both `f` and `g` must be Markov with respect to `graph` within
/// [`MEMBERSHIP_TOLERANCE`]. The result induces `f` and is `graph`-Markov.
pub fn build_from_discrimination<T: Real>(
    f: &TabularFunction<T>,
    g: Option<&TabularFunction<T>>,
    graph: &UndirectedGraph,
) -> Result<GenerativeClassifier<T>> {
    let tol = T::lit(MEMBERSHIP_TOLERANCE);
    let zero = TabularFunction::zeros(f.domain().clone());
    let g = g.unwrap_or(&zero);
    for h in [f, g] {
        let worst = pairwise_second_differences(h, graph)?
            .into_iter()
            .fold(T::zero(), |m, v| m.max(v.max_abs));
        if worst > tol {
            return Err(Error::NotMarkov {
                max_violation: worst.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let half = T::lit(0.5);
    let log_plus = g.zip_with(f, |&gv, &fv| gv + half * fv)?;
    let log_minus = g.zip_with(f, |&gv, &fv| gv - half * fv)?;
    let p = GenerativeClassifier::from_log_weights(&log_plus, &log_minus)?;
    p.require_positive()?;
    Ok(p)
}
