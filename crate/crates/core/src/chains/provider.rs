use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use super::ed::spectrum_for;
use super::free_fermion::{xy_correlators_with, Quadrature};
use super::{ChainSize, ModelSpec, ThermalPoint, ThermalSpectrum};
use crate::error::{Error, Result};
use crate::teleport::PairCorrelators;

/// How correlators are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Exact diagonalization of a periodic chain of the given length.
    Ed(ChainSize),
    /// Infinite-chain free-fermion solution (XY model only).
    FreeFermion,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Ed(l) => write!(f, "ed:{l}"),
            Strategy::FreeFermion => f.write_str("ff"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// Parses `ed:<L>` or `ff`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("ff") || s.eq_ignore_ascii_case("freefermion") {
            return Ok(Strategy::FreeFermion);
        }
        if let Some(l) = s.strip_prefix("ed:") {
            let l: usize = l
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad chain length in provider '{s}'")))?;
            return Ok(Strategy::Ed(ChainSize::new(l)?));
        }
        Err(Error::InvalidArgument(format!(
            "unknown provider '{s}', expected ed:<L> or ff"
        )))
    }
}

/// Where a set of correlators came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Provenance {
    pub strategy: Strategy,
}

impl Provenance {
    /// Chain length for ED results, `None` for the infinite chain.
    pub fn chain_length(&self) -> Option<usize> {
        match self.strategy {
            Strategy::Ed(l) => Some(l.get()),
            Strategy::FreeFermion => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProvidedCorrelators {
    pub correlators: PairCorrelators,
    pub provenance: Provenance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct SpectrumKey {
    xy: bool,
    a: i64,
    b: i64,
    l: usize,
}

impl SpectrumKey {
    fn new(model: &ModelSpec, l: usize) -> Self {
        let r = |x: f64| (x * 1e12).round() as i64;
        match *model {
            ModelSpec::Xxz { delta, h } => Self { xy: false, a: r(delta), b: r(h), l },
            ModelSpec::Xy { lambda, gamma } => Self { xy: true, a: r(lambda), b: r(gamma), l },
        }
    }
}

/// Default cache budget in stored levels (about 400 MB).
pub const DEFAULT_CACHE_LEVELS: usize = 1 << 23;

/// Dispatches correlator requests and caches ED spectra so that several
/// temperatures at one parameter point share a diagonalization.
///
/// Safe to share between threads; the cache takes a read lock for lookups and
/// a write lock for inserts.
pub struct CorrelatorProvider {
    cache: RwLock<HashMap<SpectrumKey, Arc<ThermalSpectrum>>>,
    capacity_levels: usize,
    quadrature: Quadrature,
}

impl Default for CorrelatorProvider {
    fn default() -> Self {
        Self::new()
    }
}

impl CorrelatorProvider {
    pub fn new() -> Self {
        Self::with_cache_capacity(DEFAULT_CACHE_LEVELS)
    }

    /// `capacity_levels = 0` disables caching.
    pub fn with_cache_capacity(capacity_levels: usize) -> Self {
        Self {
            cache: RwLock::new(HashMap::new()),
            capacity_levels,
            quadrature: Quadrature::default(),
        }
    }

    pub fn with_quadrature(mut self, quadrature: Quadrature) -> Self {
        self.quadrature = quadrature;
        self
    }

    pub fn correlators(&self, point: &ThermalPoint, strategy: Strategy) -> Result<ProvidedCorrelators> {
        let correlators = match strategy {
            Strategy::Ed(l) => self.spectrum(&point.model, l)?.correlators(point.kt)?,
            Strategy::FreeFermion => xy_correlators_with(point, &self.quadrature)?,
        };
        Ok(ProvidedCorrelators { correlators, provenance: Provenance { strategy } })
    }

    /// ED spectrum, from the cache when available.
    pub fn spectrum(&self, model: &ModelSpec, l: ChainSize) -> Result<Arc<ThermalSpectrum>> {
        model.validate()?;
        let key = SpectrumKey::new(model, l.get());
        if let Some(s) = self.cache.read().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return Ok(Arc::clone(s));
        }
        let spectrum = Arc::new(spectrum_for(model, l.get())?);
        let size = spectrum.levels().len();
        if size <= self.capacity_levels {
            let mut cache = self.cache.write().unwrap_or_else(|e| e.into_inner());
            let mut held: usize = cache.values().map(|s| s.levels().len()).sum();
            while held + size > self.capacity_levels {
                let Some(k) = cache.keys().next().copied() else { break };
                if let Some(old) = cache.remove(&k) {
                    held -= old.levels().len();
                }
            }
            cache.insert(key, Arc::clone(&spectrum));
        }
        Ok(spectrum)
    }

    pub fn cached_spectra(&self) -> usize {
        self.cache.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn clear_cache(&self) {
        self.cache.write().unwrap_or_else(|e| e.into_inner()).clear();
    }
}

/// Correlators through a process-wide shared provider.
pub fn correlator_provider(point: &ThermalPoint, strategy: Strategy) -> Result<ProvidedCorrelators> {
    static SHARED: OnceLock<CorrelatorProvider> = OnceLock::new();
    SHARED.get_or_init(CorrelatorProvider::new).correlators(point, strategy)
}
