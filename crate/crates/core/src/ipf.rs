//! Maximum-likelihood fitting with the discrimination function held fixed.
//!
//! Starting from `P⁰(x, c) ∝ exp(c f(x) / 2)`, iterative proportional
//! fitting rescales the joint table clique by clique so that the predictor
//! marginals `P(X_A)` match the data. Each rescaling multiplies `p(x,+1)`
//! and `p(x,-1)` by the same factor, so the log-odds never change.
//!
//! The likelihood is the joint one over `(x, c)` records. Only predictor
//! marginals are fitted; the class-conditional law is fixed by `f`.

use crate::domain::{CategoricalDomain, VariableSubset};
use crate::error::{Error, Result};
use crate::factorization::pairwise_second_differences;
use crate::generative::{Class, GenerativeClassifier, MEMBERSHIP_TOLERANCE};
use crate::graph::UndirectedGraph;
use crate::scalar::Real;
use crate::table::TabularFunction;

/// Labelled records over a categorical domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    domain: CategoricalDomain,
    records: Vec<(Vec<usize>, Class)>,
}

impl Dataset {
    /// Needs at least one record; every assignment is validated.
    pub fn new(domain: CategoricalDomain, records: Vec<(Vec<usize>, Class)>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Format("dataset has no records".into()));
        }
        for (x, _) in &records {
            domain.check_assignment(x)?;
        }
        Ok(Dataset { domain, records })
    }

    pub fn domain(&self) -> &CategoricalDomain {
        &self.domain
    }

    pub fn records(&self) -> &[(Vec<usize>, Class)] {
        &self.records
    }

    /// Number of records, `N`.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `N(x_A)` for every `x_A`, as a flat vector over `X_A`.
    pub fn counts(&self, a: &VariableSubset) -> Result<Vec<u64>> {
        let mdom = self.domain.marginal(a)?;
        let mut out = vec![0u64; mdom.size()];
        for (x, _) in &self.records {
            out[self.domain.project_index(x, a, &mdom)] += 1;
        }
        Ok(out)
    }

    /// Per-cell record counts for each class, `(N(x, +1), N(x, -1))`.
    pub fn joint_counts(&self) -> (Vec<u64>, Vec<u64>) {
        let mut plus = vec![0u64; self.domain.size()];
        let mut minus = vec![0u64; self.domain.size()];
        for (x, c) in &self.records {
            let idx = self.domain.flat_index_unchecked(x);
            match c {
                Class::Positive => plus[idx] += 1,
                Class::Negative => minus[idx] += 1,
            }
        }
        (plus, minus)
    }
}

/// Relative frequencies `N(x_A) / N`, ignoring the class.
pub fn empirical_marginal<T: Real>(
    data: &Dataset,
    a: &VariableSubset,
) -> Result<TabularFunction<T>> {
    if a.is_empty() {
        return Err(Error::Subset(
            "empirical marginal needs a non-empty subset".into(),
        ));
    }
    let counts = data.counts(a)?;
    let n = T::from_usize(data.len()).expect("record count representable");
    let values = counts
        .iter()
        .map(|&c| T::from_u64(c).expect("count representable") / n)
        .collect();
    TabularFunction::new(data.domain().marginal(a)?, values)
}

fn check_domains(p: &CategoricalDomain, data: &Dataset) -> Result<()> {
    if !p.same_shape(data.domain()) {
        return Err(Error::Domain(format!(
            "model shape {:?} does not match data shape {:?}",
            p.cardinalities(),
            data.domain().cardinalities()
        )));
    }
    Ok(())
}

/// Marginal fitting operator:
/// `T_A P(x, c) = P(x, c) · (N(x_A)/N) / P(X_A = x_A)`, with `0/0 = 0`.
///
/// A zero model marginal facing positive empirical mass cannot arise from
/// a strictly positive start and is reported as [`Error::Inconsistent`].
pub fn marginal_fit<T: Real>(
    p: &GenerativeClassifier<T>,
    a: &VariableSubset,
    data: &Dataset,
) -> Result<GenerativeClassifier<T>> {
    check_domains(p.domain(), data)?;
    let domain = p.domain();
    let current = p.marginal(a)?;
    let counts = data.counts(a)?;
    let n = T::from_usize(data.len()).expect("record count representable");
    let mdom = current.domain();
    let mut ratio = Vec::with_capacity(mdom.size());
    for (j, (&m, &c)) in current.values().iter().zip(&counts).enumerate() {
        let emp = T::from_u64(c).expect("count representable") / n;
        ratio.push(if m > T::zero() {
            emp / m
        } else if c == 0 {
            T::zero()
        } else {
            return Err(Error::Inconsistent(format!(
                "model marginal of {a} is zero at configuration {j} but the data has {c} records there"
            )));
        });
    }
    let mut factor = Vec::with_capacity(domain.size());
    domain.for_each_cell(|_, x| factor.push(ratio[domain.project_index(x, a, mdom)]));
    Ok(p.rescaled(&factor))
}

/// `Σ_records ln p(x, c)`; `-∞` if any record has probability zero.
pub fn log_likelihood<T: Real>(p: &GenerativeClassifier<T>, data: &Dataset) -> Result<T> {
    check_domains(p.domain(), data)?;
    let (plus, minus) = data.joint_counts();
    let mut ll = T::zero();
    for (counts, table) in [(&plus, p.p_plus()), (&minus, p.p_minus())] {
        for (&c, &v) in counts.iter().zip(table.values()) {
            if c > 0 {
                if !(v > T::zero()) {
                    return Ok(T::neg_infinity());
                }
                ll = ll + T::from_u64(c).expect("count representable") * v.ln();
            }
        }
    }
    Ok(ll)
}

/// Stopping rule for [`fit_ipf`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IpfOptions<T> {
    pub max_sweeps: usize,
    /// Converged once every clique marginal is within `tol` (max norm).
    pub tol: T,
}

impl<T: Real> Default for IpfOptions<T> {
    fn default() -> Self {
        IpfOptions {
            max_sweeps: 10_000,
            tol: T::lit(1e-8),
        }
    }
}

/// Summary of an IPF run.
#[derive(Clone, Debug, PartialEq)]
pub struct IpfReport<T> {
    /// Completed sweeps over all cliques.
    pub iterations: usize,
    /// `max_A ‖P(X_A) - N(x_A)/N‖_∞` after the last sweep.
    pub final_marginal_gap: T,
    /// Log-likelihood after each sweep.
    pub loglik_trace: Vec<T>,
    pub converged: bool,
}

/// Initial point `P⁰(x, c) ∝ exp(c f(x) / 2)`.
pub fn ipf_start<T: Real>(f: &TabularFunction<T>) -> Result<GenerativeClassifier<T>> {
    let half = T::lit(0.5);
    GenerativeClassifier::from_log_weights(&f.map(|&v| half * v), &f.map(|&v| -half * v))
}

fn marginal_gap<T: Real>(
    p: &GenerativeClassifier<T>,
    targets: &[(VariableSubset, TabularFunction<T>)],
) -> Result<T> {
    let mut gap = T::zero();
    for (a, emp) in targets {
        gap = gap.max(p.marginal(a)?.max_abs_diff(emp)?);
    }
    Ok(gap)
}

/// [`fit_ipf_with`] without an observer.
pub fn fit_ipf<T: Real>(
    f: &TabularFunction<T>,
    g: &UndirectedGraph,
    data: &Dataset,
    opts: IpfOptions<T>,
) -> Result<(GenerativeClassifier<T>, IpfReport<T>)> {
    fit_ipf_with(f, g, data, opts, |_, _| {})
}

/// Fixed-discrimination maximum likelihood over the marginally extended
/// `g`-Markov classifiers inducing `f`.
///
/// Sweeps the maximal cliques in lexicographic order, renormalizing after
/// each sweep, and calls `observe(sweep, &P)` after every sweep. Running out
/// of sweeps is not an error; the report says `converged: false`.
pub fn fit_ipf_with<T: Real>(
    f: &TabularFunction<T>,
    g: &UndirectedGraph,
    data: &Dataset,
    opts: IpfOptions<T>,
    mut observe: impl FnMut(usize, &GenerativeClassifier<T>),
) -> Result<(GenerativeClassifier<T>, IpfReport<T>)> {
    if opts.max_sweeps == 0 {
        return Err(Error::Format("max_sweeps must be at least 1".into()));
    }
    if !(opts.tol > T::zero()) {
        return Err(Error::Format("tolerance must be positive".into()));
    }
    check_domains(f.domain(), data)?;
    let worst = pairwise_second_differences(f, g)?
        .into_iter()
        .fold(T::zero(), |m, v| m.max(v.max_abs));
    if worst > T::lit(MEMBERSHIP_TOLERANCE) {
        return Err(Error::NotMarkov {
            max_violation: worst.to_f64().unwrap_or(f64::NAN),
        });
    }

    let cliques = g.maximal_cliques();
    let targets: Vec<(VariableSubset, TabularFunction<T>)> = cliques
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| Ok((c.clone(), empirical_marginal(data, c)?)))
        .collect::<Result<_>>()?;

    let mut p = ipf_start(f)?;
    let drift_tol = T::normalization_tolerance(2 * f.domain().size());
    let mut trace = Vec::new();
    let mut gap = T::infinity();
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        for (a, _) in &targets {
            p = marginal_fit(&p, a, data)?;
        }
        let total = p.renormalize();
        if (total - T::one()).abs() > drift_tol {
            return Err(Error::Inconsistent(format!(
                "probability mass drifted to {total:?} during sweep {}",
                sweeps + 1
            )));
        }
        sweeps += 1;
        trace.push(log_likelihood(&p, data)?);
        observe(sweeps, &p);
        gap = marginal_gap(&p, &targets)?;
        if gap <= opts.tol {
            break;
        }
    }
    let converged = gap <= opts.tol;
    Ok((
        p,
        IpfReport {
            iterations: sweeps,
            final_marginal_gap: gap,
            loglik_trace: trace,
            converged,
        },
    ))
}
