//! Seeded samplers for the Linial–Meshulam process, the clique complex process and the
//! uniform model `Y^{(d)}(n, m)`.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, colex_unrank, KSubsets};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::filtration::{dyadic, Filtration, Time};

/// A reproducible random stream: one ChaCha8 stream per `(master, trial)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master: u64,
    pub trial: u64,
}

impl SeedSpec {
    pub fn new(master: u64, trial: u64) -> Self {
        SeedSpec { master, trial }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.trial);
        rng
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcessKind {
    #[default]
    LinialMeshulam,
    Clique,
    UniformComplex,
}

/// Distribution of the independent birth times.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BirthLaw {
    /// `k / 2^32` with `k` uniform on `0..2^32`.
    #[default]
    Uniform,
    /// Mean-one exponential, stored as the exact value of its `f64` sample.
    Exponential,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessSpec {
    pub kind: ProcessKind,
    pub n: usize,
    pub d: usize,
    #[serde(default)]
    pub birth_law: BirthLaw,
    /// Truncation dimension of the clique process (defaults to `d`).
    #[serde(default)]
    pub max_dim: Option<usize>,
    /// Number of `d`-simplices in the uniform model.
    #[serde(default)]
    pub m: Option<u64>,
}

impl ProcessSpec {
    pub fn linial_meshulam(n: usize, d: usize) -> Self {
        ProcessSpec { kind: ProcessKind::LinialMeshulam, n, d, birth_law: BirthLaw::Uniform, max_dim: None, m: None }
    }

    pub fn clique(n: usize, d: usize, max_dim: usize) -> Self {
        ProcessSpec { kind: ProcessKind::Clique, n, d, birth_law: BirthLaw::Uniform, max_dim: Some(max_dim), m: None }
    }

    pub fn uniform_complex(n: usize, d: usize, m: u64) -> Self {
        ProcessSpec { kind: ProcessKind::UniformComplex, n, d, birth_law: BirthLaw::Uniform, max_dim: None, m: Some(m) }
    }

    pub fn clique_max_dim(&self) -> usize {
        self.max_dim.unwrap_or(self.d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 1 || self.d + 1 > self.n {
            return Err(Error::domain(format!("need 1 <= d <= n-1, got n = {}, d = {}", self.n, self.d)));
        }
        if self.n > u32::MAX as usize {
            return Err(Error::domain("too many vertices"));
        }
        match self.kind {
            ProcessKind::Clique => {
                let top = self.clique_max_dim();
                if top < 1 || top + 1 > self.n {
                    return Err(Error::domain(format!("clique truncation {top} outside 1..={}", self.n - 1)));
                }
            }
            ProcessKind::UniformComplex => {
                let m = self.m.ok_or_else(|| Error::domain("uniform model needs m"))?;
                let total = binomial(self.n as u64, self.d as u64 + 1);
                if u128::from(m) > total {
                    return Err(Error::domain(format!("m = {m} exceeds C(n, d+1) = {total}")));
                }
            }
            ProcessKind::LinialMeshulam => {}
        }
        Ok(())
    }

    /// Draws one filtration. The uniform model yields the constant filtration of its complex.
    pub fn sample(&self, seed: SeedSpec) -> Result<Filtration> {
        self.validate()?;
        match self.kind {
            ProcessKind::LinialMeshulam => lm_process_with(self.n, self.d, self.birth_law, seed),
            ProcessKind::Clique => clique_process_with(self.n, self.clique_max_dim(), self.birth_law, seed),
            ProcessKind::UniformComplex => {
                Ok(Filtration::constant(uniform_complex(self.n, self.d, self.m.expect("validated"), seed)?))
            }
        }
    }
}

fn draw(rng: &mut ChaCha8Rng, law: BirthLaw) -> Time {
    match law {
        BirthLaw::Uniform => dyadic(rng.next_u32()),
        BirthLaw::Exponential => {
            let u: f64 = rng.random();
            let t = -(-u).ln_1p();
            BigRational::from_float(t).unwrap_or_else(Time::zero)
        }
    }
}

/// Raw Linial–Meshulam sample: one 32-bit tick per `d`-simplex, in lexicographic order.
/// The birth time of a simplex is `tick / 2^32`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LmSample {
    pub n: usize,
    pub d: usize,
    pub ticks: Vec<u32>,
}

impl LmSample {
    pub fn draw(n: usize, d: usize, seed: SeedSpec) -> Result<Self> {
        ProcessSpec::linial_meshulam(n, d).validate()?;
        let count = binomial(n as u64, d as u64 + 1);
        let count = usize::try_from(count).map_err(|_| Error::domain("too many simplices"))?;
        let mut rng = seed.rng();
        Ok(LmSample { n, d, ticks: (0..count).map(|_| rng.next_u32()).collect() })
    }

    /// The sample as a filtration (all faces of dimension `< d` born at 0).
    pub fn filtration(&self) -> Filtration {
        let x = SimplicialComplex::skeleton(self.n, self.d).expect("validated on draw");
        let mut births: Vec<Vec<Time>> = (0..self.d).map(|k| vec![Time::zero(); x.f(k)]).collect();
        births.push(self.ticks.iter().map(|&t| dyadic(t)).collect());
        Filtration::new(x, births).expect("lower faces are born first")
    }
}

/// `d`-Linial–Meshulam process: complete `(d-1)`-skeleton at time 0, each `d`-simplex at an
/// independent uniform time.
pub fn lm_process(n: usize, d: usize, seed: SeedSpec) -> Result<Filtration> {
    Ok(LmSample::draw(n, d, seed)?.filtration())
}

fn lm_process_with(n: usize, d: usize, law: BirthLaw, seed: SeedSpec) -> Result<Filtration> {
    if law == BirthLaw::Uniform {
        return lm_process(n, d, seed);
    }
    let x = SimplicialComplex::skeleton(n, d)?;
    let mut rng = seed.rng();
    let mut births: Vec<Vec<Time>> = (0..d).map(|k| vec![Time::zero(); x.f(k)]).collect();
    births.push((0..x.f(d)).map(|_| draw(&mut rng, law)).collect());
    Filtration::new(x, births)
}

/// Clique complex process truncated at `max_dim`: vertices at 0, independent edge times, and
/// every higher simplex born when its last edge appears.
pub fn clique_process(n: usize, seed: SeedSpec, max_dim: usize) -> Result<Filtration> {
    clique_process_with(n, max_dim, BirthLaw::Uniform, seed)
}

fn clique_process_with(n: usize, max_dim: usize, law: BirthLaw, seed: SeedSpec) -> Result<Filtration> {
    if max_dim < 1 || max_dim + 1 > n {
        return Err(Error::domain(format!("clique truncation {max_dim} outside 1..={}", n.saturating_sub(1))));
    }
    let x = SimplicialComplex::skeleton(n, max_dim)?;
    let mut rng = seed.rng();
    let edge_times: Vec<Time> = (0..x.f(1)).map(|_| draw(&mut rng, law)).collect();
    let mut births = vec![vec![Time::zero(); n], edge_times];
    for k in 2..=max_dim {
        let level = x
            .simplices(k)
            .iter()
            .map(|s| {
                // the latest edge of a simplex is the latest edge of one of its facets
                s.facets()
                    .map(|(_, f)| births[k - 1][x.index_of(f.vertices()).expect("closed")].clone())
                    .max()
                    .expect("k >= 2 has facets")
            })
            .collect();
        births.push(level);
    }
    Filtration::new(x, births)
}

/// `Y^{(d)}(n, m)`: complete `(d-1)`-skeleton plus `m` distinct `d`-simplices chosen uniformly.
pub fn uniform_complex(n: usize, d: usize, m: u64, seed: SeedSpec) -> Result<SimplicialComplex> {
    ProcessSpec::uniform_complex(n, d, m).validate()?;
    let total = binomial(n as u64, d as u64 + 1) as usize;
    let mut rng = seed.rng();
    let picks = rand::seq::index::sample(&mut rng, total, m as usize);
    let mut top: Vec<Simplex> = picks
        .into_iter()
        .map(|r| Simplex::from_sorted(colex_unrank(r as u128, d + 1)))
        .collect();
    top.sort_unstable();
    let mut levels: Vec<Vec<Simplex>> = (0..d)
        .map(|k| KSubsets::new(n, k + 1).map(Simplex::from_sorted).collect())
        .collect();
    if !top.is_empty() {
        levels.push(top);
    }
    Ok(SimplicialComplex::from_sorted_levels(n, levels))
}
