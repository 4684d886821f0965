//! Persistence diagrams by column reduction, Betti curves, and lifetime functionals.

use std::fmt;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::{format_time, parse_time, Filtration, Time};
use crate::linalg::{Backend, ColumnReducer, Field, Gf, GfAlt, RankOracle};

/// A time or `+∞`; `Finite` sorts before `Infinite`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    Finite(Time),
    Infinite,
}

impl Extended {
    pub fn finite(&self) -> Option<&Time> {
        match self {
            Extended::Finite(t) => Some(t),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(t) => t.to_f64().unwrap_or(f64::NAN),
            Extended::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(t) => write!(f, "{}", format_time(t)),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PersistencePair {
    pub birth: Time,
    pub death: Extended,
}

impl PersistencePair {
    pub fn lifetime(&self) -> Extended {
        match &self.death {
            Extended::Finite(d) => Extended::Finite(d - &self.birth),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

/// Multiset of (birth, death) pairs of one homological degree, sorted.
/// Degree 0 is always reduced homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersistenceDiagram {
    degree: usize,
    pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    /// Zero-length pairs are dropped; a death before its birth is rejected.
    pub fn new(degree: usize, pairs: Vec<PersistencePair>) -> Result<Self> {
        let mut kept = Vec::with_capacity(pairs.len());
        for p in pairs {
            match &p.death {
                Extended::Finite(d) if *d < p.birth => {
                    return Err(Error::domain(format!(
                        "pair ({}, {}) dies before it is born",
                        format_time(&p.birth),
                        p.death
                    )))
                }
                Extended::Finite(d) if *d == p.birth => {}
                _ => kept.push(p),
            }
        }
        kept.sort();
        Ok(PersistenceDiagram { degree, pairs: kept })
    }

    pub fn empty(degree: usize) -> Self {
        PersistenceDiagram { degree, pairs: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn infinite_count(&self) -> usize {
        self.pairs.iter().filter(|p| p.death.is_infinite()).count()
    }

    pub fn finite_count(&self) -> usize {
        self.len() - self.infinite_count()
    }

    /// `Σ (death - birth)`, infinite as soon as one class never dies.
    pub fn lifetime_sum(&self) -> Extended {
        let mut acc = Time::zero();
        for p in &self.pairs {
            match &p.death {
                Extended::Finite(d) => acc += d - &p.birth,
                Extended::Infinite => return Extended::Infinite,
            }
        }
        Extended::Finite(acc)
    }

    /// Number of classes alive on all of `[s, t]`: `#{b <= s, t < d}`.
    pub fn persistent_betti(&self, s: &Time, t: &Time) -> Result<usize> {
        if s > t {
            return Err(Error::domain(format!("persistent Betti needs s <= t, got {} > {}", format_time(s), format_time(t))));
        }
        let t = Extended::Finite(t.clone());
        Ok(self.pairs.iter().filter(|p| p.birth <= *s && p.death > t).count())
    }

    /// `Σ (d - b)^2` over the (necessarily finite) pairs.
    pub fn l2_norm_sq(&self) -> Result<Time> {
        let mut acc = Time::zero();
        for p in &self.pairs {
            let d = self.require_finite(p)?;
            let l = d - &p.birth;
            acc += &l * &l;
        }
        Ok(acc)
    }

    /// `2 ∫∫_{s <= t} β(s, t) ds dt`, evaluated cell by cell on the grid spanned by all
    /// birth and death coordinates (the persistent Betti number is constant on each open cell).
    pub fn l2_via_integral(&self) -> Result<Time> {
        for p in &self.pairs {
            self.require_finite(p)?;
        }
        let mut xs: Vec<Time> = self
            .pairs
            .iter()
            .flat_map(|p| [p.birth.clone(), p.death.finite().expect("checked").clone()])
            .collect();
        xs.sort();
        xs.dedup();
        let two = BigRational::from_integer(2.into());
        let mids: Vec<Time> = xs.windows(2).map(|w| (&w[0] + &w[1]) / &two).collect();
        let widths: Vec<Time> = xs.windows(2).map(|w| &w[1] - &w[0]).collect();
        let mut acc = Time::zero();
        for i in 0..mids.len() {
            for j in i..mids.len() {
                let beta = self.persistent_betti(&mids[i], &mids[j]).expect("ordered midpoints");
                if beta == 0 {
                    continue;
                }
                let mut area = &widths[i] * &widths[j];
                if i == j {
                    area /= &two;
                }
                acc += area * BigRational::from_integer(beta.into());
            }
        }
        Ok(acc * two)
    }

    fn require_finite<'a>(&self, p: &'a PersistencePair) -> Result<&'a Time> {
        p.death.finite().ok_or_else(|| {
            Error::domain(format!("degree-{} diagram has an infinite pair born at {}", self.degree, format_time(&p.birth)))
        })
    }
}

/// Right-continuous step function: value `steps[i].1` on `[steps[i].0, steps[i+1].0)`, zero before the first step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiCurve {
    degree: usize,
    steps: Vec<(Time, usize)>,
}

impl BettiCurve {
    /// Merges repeated values; step times must be strictly increasing.
    pub fn from_steps(degree: usize, steps: Vec<(Time, usize)>) -> Result<Self> {
        if steps.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::domain("Betti curve breakpoints must be strictly increasing"));
        }
        let mut merged: Vec<(Time, usize)> = Vec::with_capacity(steps.len());
        let mut current = 0usize;
        for (t, v) in steps {
            if v != current {
                merged.push((t, v));
                current = v;
            }
        }
        Ok(BettiCurve { degree, steps: merged })
    }

    /// `β_k(t) = #{b <= t < d}` read off a diagram.
    pub fn from_diagram(diagram: &PersistenceDiagram) -> Self {
        let mut deltas: Vec<(Time, i64)> = Vec::with_capacity(2 * diagram.len());
        for p in diagram.pairs() {
            deltas.push((p.birth.clone(), 1));
            if let Extended::Finite(d) = &p.death {
                deltas.push((d.clone(), -1));
            }
        }
        deltas.sort();
        let mut steps: Vec<(Time, usize)> = Vec::new();
        let mut value = 0i64;
        for (t, dv) in deltas {
            value += dv;
            match steps.last_mut() {
                Some(last) if last.0 == t => last.1 = value as usize,
                _ => steps.push((t, value as usize)),
            }
        }
        BettiCurve::from_steps(diagram.degree(), steps).expect("sorted breakpoints")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn steps(&self) -> &[(Time, usize)] {
        &self.steps
    }

    pub fn value_at(&self, t: &Time) -> usize {
        match self.steps.partition_point(|(s, _)| s <= t) {
            0 => 0,
            i => self.steps[i - 1].1,
        }
    }

    /// Value after the last breakpoint.
    pub fn final_value(&self) -> usize {
        self.steps.last().map_or(0, |s| s.1)
    }

    /// `∫_0^upto β(t) dt`, exact.
    pub fn integrate(&self, upto: &Time) -> Time {
        let mut acc = Time::zero();
        for (i, (t, v)) in self.steps.iter().enumerate() {
            if t >= upto {
                break;
            }
            let end = match self.steps.get(i + 1) {
                Some((next, _)) if next < upto => next,
                _ => upto,
            };
            acc += (end - t) * BigRational::from_integer((*v).into());
        }
        acc
    }

    /// `∫_0^∞ β(t) dt`; infinite when the curve does not return to zero.
    pub fn total_integral(&self) -> Extended {
        if self.final_value() > 0 {
            return Extended::Infinite;
        }
        match self.steps.last() {
            Some((t, _)) => Extended::Finite(self.integrate(t)),
            None => Extended::Finite(Time::zero()),
        }
    }
}

/// Persistence diagram of `H_k` (reduced for `k = 0`). Degrees above the dimension give
/// an empty diagram.
pub fn compute_persistence(f: &Filtration, k: usize, backend: Backend) -> PersistenceDiagram {
    match backend {
        Backend::Rational => persistence_over::<BigRational>(f, k),
        Backend::Modular => persistence_over::<Gf>(f, k),
        Backend::ModularAlt => persistence_over::<GfAlt>(f, k),
    }
}

fn persistence_over<F: Field>(f: &Filtration, k: usize) -> PersistenceDiagram {
    let cx = f.complex();
    if k > cx.dim() {
        return PersistenceDiagram::empty(k);
    }
    let order_k = f.order(k);
    let pos_k = positions(&order_k);

    // which k-simplices create a class: those whose boundary column is dependent
    let positive: Vec<bool> = if k == 0 {
        (0..order_k.len()).map(|p| p > 0).collect()
    } else {
        let pos_below = positions(&f.order(k - 1));
        let mut reducer = ColumnReducer::<F>::new(cx.f(k - 1));
        order_k
            .iter()
            .map(|&i| reducer.push(remapped_column(cx.boundary_column(k, i), &pos_below)).is_none())
            .collect()
    };
    let n_positive = positive.iter().filter(|&&p| p).count();

    let mut deaths: Vec<Option<usize>> = vec![None; order_k.len()];
    let mut paired = 0;
    if k < cx.dim() {
        let mut reducer = ColumnReducer::<F>::new(cx.f(k));
        for j in f.order(k + 1) {
            // every remaining column would reduce to zero
            if paired == n_positive {
                break;
            }
            if let Some(low) = reducer.push(remapped_column(cx.boundary_column(k + 1, j), &pos_k)) {
                debug_assert!(positive[low]);
                deaths[low] = Some(j);
                paired += 1;
            }
        }
    }

    let pairs = (0..order_k.len())
        .filter(|&p| positive[p])
        .map(|p| PersistencePair {
            birth: f.birth(k, order_k[p]).clone(),
            death: match deaths[p] {
                Some(j) => Extended::Finite(f.birth(k + 1, j).clone()),
                None => Extended::Infinite,
            },
        })
        .collect();
    PersistenceDiagram::new(k, pairs).expect("deaths never precede births in a filtration")
}

fn positions(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    pos
}

fn remapped_column<F: crate::linalg::Ring>(col: Vec<(usize, F)>, pos: &[usize]) -> Vec<(usize, F)> {
    let mut out: Vec<(usize, F)> = col.into_iter().map(|(r, v)| (pos[r], v)).collect();
    out.sort_unstable_by_key(|e| e.0);
    out
}

/// `β_k(X(t))` at every event time, computed from ranks of the boundary operators of
/// each sublevel complex rather than from a pairing.
pub fn betti_curve(f: &Filtration, k: usize, backend: Backend) -> BettiCurve {
    match backend {
        Backend::Rational => betti_curve_over::<BigRational>(f, k),
        Backend::Modular => betti_curve_over::<Gf>(f, k),
        Backend::ModularAlt => betti_curve_over::<GfAlt>(f, k),
    }
}

fn betti_curve_over<F: Field>(f: &Filtration, k: usize) -> BettiCurve {
    let cx = f.complex();
    if k > cx.dim() {
        return BettiCurve { degree: k, steps: Vec::new() };
    }
    let column = |dim: usize, i: usize| -> Vec<(usize, F)> {
        if dim == 0 {
            vec![(0, F::one())]
        } else {
            cx.boundary_column(dim, i)
        }
    };
    let mut low = RankOracle::<F>::new(if k == 0 { 1 } else { cx.f(k - 1) });
    let mut high = RankOracle::<F>::new(cx.f(k));
    let order_k = f.order(k);
    let order_high = if k < cx.dim() { f.order(k + 1) } else { Vec::new() };
    let (mut a, mut b) = (0, 0);
    let mut steps = Vec::new();
    for t in f.event_times(k + 1) {
        while a < order_k.len() && *f.birth(k, order_k[a]) <= t {
            low.try_add(&column(k, order_k[a]));
            a += 1;
        }
        while b < order_high.len() && *f.birth(k + 1, order_high[b]) <= t {
            high.try_add(&column(k + 1, order_high[b]));
            b += 1;
        }
        steps.push((t, a - low.accepted() - high.accepted()));
    }
    BettiCurve::from_steps(k, steps).expect("event times are increasing")
}

#[derive(Serialize, Deserialize)]
struct PairRecord {
    degree: usize,
    birth: String,
    death: String,
}

/// JSON array of `{degree, birth: "p/q", death: "p/q" | "inf"}`.
pub fn diagrams_to_json(diagrams: &[PersistenceDiagram]) -> serde_json::Value {
    let records: Vec<PairRecord> = diagrams
        .iter()
        .flat_map(|d| {
            d.pairs().iter().map(move |p| PairRecord {
                degree: d.degree(),
                birth: format_time(&p.birth),
                death: p.death.to_string(),
            })
        })
        .collect();
    serde_json::to_value(records).expect("plain records serialize")
}

/// Inverse of [`diagrams_to_json`]; one diagram per degree present, in increasing degree.
pub fn diagrams_from_json(value: &serde_json::Value) -> Result<Vec<PersistenceDiagram>> {
    let records: Vec<PairRecord> = serde_json::from_value(value.clone())?;
    let mut by_degree: std::collections::BTreeMap<usize, Vec<PersistencePair>> = Default::default();
    for r in records {
        let death = if r.death == "inf" { Extended::Infinite } else { Extended::Finite(parse_time(&r.death)?) };
        by_degree.entry(r.degree).or_default().push(PersistencePair { birth: parse_time(&r.birth)?, death });
    }
    by_degree.into_iter().map(|(k, pairs)| PersistenceDiagram::new(k, pairs)).collect()
}

/// CSV with decimal columns (17 significant digits) followed by exact `p/q` columns.
pub fn diagrams_to_csv(diagrams: &[PersistenceDiagram]) -> String {
    let mut out = String::from("degree,birth,death,lifetime,birth_exact,death_exact,lifetime_exact\n");
    for d in diagrams {
        for p in d.pairs() {
            let life = p.lifetime();
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                d.degree(),
                decimal17(p.birth.to_f64().unwrap_or(f64::NAN)),
                decimal17(p.death.to_f64()),
                decimal17(life.to_f64()),
                format_time(&p.birth),
                p.death,
                life
            ));
        }
    }
    out
}

/// Plain decimal rendering with 17 significant digits (`inf` for infinity).
pub fn decimal17(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 || x.is_nan() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-20..=20).contains(&exponent) {
        return format!("{x:.16e}");
    }
    let decimals = (16 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}
