//! Filtrations: a complex with an exact rational birth time per simplex.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

pub type Time = BigRational;

/// `ticks / 2^32`, the exact value of a 32-bit uniform sample.
pub fn dyadic(ticks: u32) -> Time {
    BigRational::new(BigInt::from(ticks), BigInt::from(1u64 << 32))
}

/// `"p/q"` with an explicit denominator, even when it is 1.
pub fn format_time(t: &Time) -> String {
    format!("{}/{}", t.numer(), t.denom())
}

/// Parses `"p/q"` or an integer `"p"`.
pub fn parse_time(s: &str) -> Result<Time> {
    let bad = || Error::domain(format!("cannot parse time '{s}'"));
    let t = match s.split_once('/') {
        Some((p, q)) => {
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            BigRational::new(BigInt::from_str(p.trim()).map_err(|_| bad())?, q)
        }
        None => BigRational::from_integer(BigInt::from_str(s.trim()).map_err(|_| bad())?),
    };
    Ok(t)
}

/// A complex together with monotone birth times; `births[k][i]` belongs to `complex.simplices(k)[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    complex: SimplicialComplex,
    births: Vec<Vec<Time>>,
}

impl Filtration {
    /// Checks shapes, nonnegativity and face monotonicity.
    pub fn new(complex: SimplicialComplex, births: Vec<Vec<Time>>) -> Result<Self> {
        if births.len() != complex.dim() + 1 {
            return Err(Error::InvalidFiltration(format!(
                "{} birth levels for a complex of dimension {}",
                births.len(),
                complex.dim()
            )));
        }
        for (k, level) in births.iter().enumerate() {
            if level.len() != complex.f(k) {
                return Err(Error::InvalidFiltration(format!(
                    "{} birth times for {} simplices of dimension {k}",
                    level.len(),
                    complex.f(k)
                )));
            }
            if let Some(i) = level.iter().position(Signed::is_negative) {
                return Err(Error::InvalidFiltration(format!(
                    "{} has negative birth time",
                    complex.simplices(k)[i]
                )));
            }
        }
        for k in 1..births.len() {
            for (i, s) in complex.simplices(k).iter().enumerate() {
                for (_, face) in s.facets() {
                    let j = complex.index_of(face.vertices()).expect("closed complex");
                    if births[k - 1][j] > births[k][i] {
                        return Err(Error::InvalidFiltration(format!(
                            "{face} born at {} after its coface {s} at {}",
                            format_time(&births[k - 1][j]),
                            format_time(&births[k][i])
                        )));
                    }
                }
            }
        }
        Ok(Filtration { complex, births })
    }

    /// Builds from `(simplex, time)` pairs. Vertices not listed are born at time 0;
    /// every other face must be listed. Repeated simplices are rejected.
    pub fn from_pairs(n_vertices: usize, pairs: Vec<(Simplex, Time)>) -> Result<Self> {
        let complex = SimplicialComplex::from_simplices(n_vertices, pairs.iter().map(|(s, _)| s.clone()))?;
        let mut births: Vec<Vec<Option<Time>>> = (0..=complex.dim()).map(|k| vec![None; complex.f(k)]).collect();
        for (s, t) in pairs {
            let i = complex.index_of(s.vertices()).expect("simplex was inserted");
            let slot = &mut births[s.dim()][i];
            if slot.is_some() {
                return Err(Error::InvalidFiltration(format!("{s} listed twice")));
            }
            *slot = Some(t);
        }
        let births = births
            .into_iter()
            .map(|level| level.into_iter().map(|t| t.unwrap_or_else(Time::zero)).collect())
            .collect();
        Filtration::new(complex, births)
    }

    /// Every simplex born at time 0.
    pub fn constant(complex: SimplicialComplex) -> Self {
        let births = (0..=complex.dim()).map(|k| vec![Time::zero(); complex.f(k)]).collect();
        Filtration { complex, births }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn births(&self, k: usize) -> &[Time] {
        self.births.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn birth(&self, k: usize, i: usize) -> &Time {
        &self.births[k][i]
    }

    pub fn birth_of(&self, vertices: &[u32]) -> Option<&Time> {
        let i = self.complex.index_of(vertices)?;
        Some(&self.births[vertices.len() - 1][i])
    }

    /// Largest birth time; the complex is complete from then on.
    pub fn saturation_time(&self) -> Time {
        self.births.iter().flatten().max().cloned().unwrap_or_else(Time::zero)
    }

    /// Indices of the `k`-simplices sorted by (birth, lexicographic).
    pub fn order(&self, k: usize) -> Vec<usize> {
        let level = self.births(k);
        let mut idx: Vec<usize> = (0..level.len()).collect();
        // the index already is the lexicographic rank, so a stable sort by time suffices
        idx.sort_by(|&a, &b| level[a].cmp(&level[b]));
        idx
    }

    /// All simplices of dimension `<= max_dim` sorted by (birth, dimension, lexicographic).
    /// Faces never come after their cofaces.
    pub fn events(&self, max_dim: usize) -> Vec<(Time, Simplex)> {
        let mut out: Vec<(Time, usize, usize)> = Vec::new();
        for k in 0..=max_dim.min(self.dim()) {
            out.extend(self.births[k].iter().enumerate().map(|(i, t)| (t.clone(), k, i)));
        }
        out.sort();
        out.into_iter()
            .map(|(t, k, i)| (t, self.complex.simplices(k)[i].clone()))
            .collect()
    }

    /// Sorted distinct birth times of simplices of dimension `<= max_dim`.
    pub fn event_times(&self, max_dim: usize) -> Vec<Time> {
        let mut ts: Vec<Time> = self.births.iter().take(max_dim + 1).flatten().cloned().collect();
        ts.sort();
        ts.dedup();
        ts
    }

    /// Sum of the birth times of the given `k`-simplices.
    pub fn weight(&self, k: usize, indices: impl IntoIterator<Item = usize>) -> Time {
        indices.into_iter().fold(Time::zero(), |acc, i| acc + &self.births[k][i])
    }

    /// The filtration truncated to its `k`-skeleton.
    pub fn skeleton(&self, k: usize) -> Filtration {
        let keep = (k + 1).min(self.births.len());
        Filtration { complex: self.complex.skeleton_of(k), births: self.births[..keep].to_vec() }
    }

    /// Text form: one line `v0 ... vk p/q` per simplex in event order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# vertices {}", self.complex.n_vertices());
        for (t, s) in self.events(self.dim()) {
            for v in s.vertices() {
                let _ = write!(out, "{v} ");
            }
            let _ = writeln!(out, "{}", format_time(&t));
        }
        out
    }

    /// Parses the text form. The vertex count is the largest vertex id plus one, or the
    /// value of a `# vertices N` header when that is larger.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut n_vertices = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(n) = rest.trim().strip_prefix("vertices") {
                    if let Ok(n) = n.trim().parse::<usize>() {
                        n_vertices = n_vertices.max(n);
                    }
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let perr = |message: String| Error::Parse { line: lineno + 1, message };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let (time, verts) = tokens.split_last().expect("nonempty line");
            if verts.is_empty() {
                return Err(perr("expected vertices followed by a birth time".into()));
            }
            let verts = verts
                .iter()
                .map(|v| v.parse::<u32>().map_err(|_| perr(format!("bad vertex id '{v}'"))))
                .collect::<Result<Vec<u32>>>()?;
            let simplex = Simplex::new(verts).map_err(|e| perr(e.to_string()))?;
            let t = parse_time(time).map_err(|e| perr(e.to_string()))?;
            n_vertices = n_vertices.max(*simplex.vertices().last().expect("nonempty") as usize + 1);
            pairs.push((simplex, t));
        }
        Filtration::from_pairs(n_vertices, pairs)
    }
}
