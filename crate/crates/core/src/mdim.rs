//! Window dimensions of CA images along Følner boxes: algebraic mean
//! dimension for symbolic alphabets and its entropy analogue for finite ones.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::ca::{dependency_region, CellularAutomaton};
use crate::deciders::{window_map, RestrictionMap};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupUniverse};
use crate::shift::ImageAutomaton;
use crate::sofic::Tiling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowMethod {
    /// Word count of the image language (finite alphabet, `Z`, interval).
    ImageAutomaton,
    /// Order of the image of the window map `A^{FM} → A^F`.
    WindowMap,
    /// Rank of the block window matrix (symbolic alphabets).
    Rank,
}

/// `Γ_F` for `Γ = τ(A^G)`: its dimension and the number of its connected
/// components (the number of words for finite alphabets). All values are
/// exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowValue {
    pub sites: usize,
    pub dim: usize,
    #[serde(serialize_with = "crate::serialize_biguint")]
    pub count: BigUint,
    pub method: WindowMethod,
}

impl WindowValue {
    /// `dim Γ_F / |F|`.
    pub fn ratio(&self) -> Ratio<usize> {
        Ratio::new(self.dim, self.sites.max(1))
    }

    /// `log |Γ_F| / |F| = log base`, decided as `|Γ_F| = base^{|F|}`.
    pub fn entropy_is_log_of(&self, base: usize) -> bool {
        self.count == BigUint::from(base).pow(self.sites as u32)
    }

    /// `log |Γ_F| / |F|` in floating point, for display only.
    pub fn entropy(&self) -> f64 {
        let bits = self.count.bits();
        let shift = bits.saturating_sub(52);
        let mantissa = (&self.count >> shift).to_f64().unwrap_or(f64::INFINITY);
        (mantissa.ln() + shift as f64 * std::f64::consts::LN_2) / self.sites.max(1) as f64
    }
}

fn interval_start(window: &[GroupElement]) -> Option<i64> {
    let xs: Vec<i64> = window
        .iter()
        .map(|g| match g {
            GroupElement::Vector(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        })
        .collect::<Option<_>>()?;
    let lo = *xs.iter().min()?;
    let mut sorted = xs.clone();
    sorted.sort_unstable();
    sorted.dedup();
    (sorted.len() == xs.len() && sorted.iter().enumerate().all(|(i, &x)| x == lo + i as i64)).then_some(lo)
}

/// Exact `dim Γ_F` and `|π₀(Γ_F)|` (or `|Γ_F|`) for the image of `ca`.
pub fn window_dim(ca: &CellularAutomaton, window: &[GroupElement]) -> Result<WindowValue> {
    if window.is_empty() {
        return Err(Error::EmptyShape);
    }
    for g in window {
        ca.universe().check(g)?;
    }
    let sites = window.len();
    if ca.alphabet().as_finite().is_some() && ca.universe().is_integers() && interval_start(window).is_some() {
        let automaton = ImageAutomaton::from_ca(ca)?;
        return Ok(WindowValue {
            sites,
            dim: 0,
            count: automaton.word_count(sites),
            method: WindowMethod::ImageAutomaton,
        });
    }
    let inputs = dependency_region(ca, window);
    let (dim, count, method) = match window_map(ca, &inputs, window)? {
        RestrictionMap::Abelian(m) => (0, m.image_order(), WindowMethod::WindowMap),
        RestrictionMap::Table(t) => (0, BigUint::from(t.image_and_kernel_orders().0), WindowMethod::WindowMap),
        RestrictionMap::Symbolic { connected, components } => (connected.rank(), components.image_order(), WindowMethod::Rank),
    };
    Ok(WindowValue { sites, dim, count, method })
}

/// Window values on the first `k` Følner boxes. The reported estimate is the
/// value on the largest box; no limit is extrapolated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MdimEstimate {
    pub alphabet_dim: usize,
    pub alphabet_components: usize,
    pub windows: Vec<WindowValue>,
}

impl MdimEstimate {
    pub fn ratios(&self) -> Vec<Ratio<usize>> {
        self.windows.iter().map(WindowValue::ratio).collect()
    }

    pub fn estimate(&self) -> Option<Ratio<usize>> {
        self.windows.last().map(WindowValue::ratio)
    }

    pub fn entropy_estimate(&self) -> Option<f64> {
        self.windows.last().map(WindowValue::entropy)
    }

    /// Every ratio equals `dim A`.
    pub fn is_full_dimensional(&self) -> bool {
        self.windows.iter().all(|w| w.dim == self.alphabet_dim * w.sites)
    }
}

pub fn mdim_estimate(ca: &CellularAutomaton, k: u32) -> Result<MdimEstimate> {
    let u: &GroupUniverse = ca.universe();
    if !u.is_amenable() {
        return Err(Error::NotAmenable(u.to_string()));
    }
    let windows = (0..k)
        .map(|i| window_dim(ca, &u.folner_box(i)?.elements))
        .collect::<Result<_>>()?;
    Ok(MdimEstimate {
        alphabet_dim: ca.alphabet().dim(),
        alphabet_components: ca.alphabet().pi0().order(),
        windows,
    })
}

/// Result of checking that every tile window of the image is proper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionC {
    pub tiles: usize,
    pub proper_tiles: usize,
    pub holds: bool,
    /// Sites of the largest Følner box inside the tiled region.
    pub box_sites: usize,
    /// When the condition holds: the value on that box is strictly below the
    /// full shift (dimension for symbolic alphabets, word count otherwise).
    pub strictly_below: Option<bool>,
}

fn is_proper(ca: &CellularAutomaton, w: &WindowValue) -> bool {
    match ca.alphabet().as_symbolic() {
        Some(s) => w.dim < s.rank * w.sites,
        None => !w.entropy_is_log_of(ca.alphabet().pi0().order()),
    }
}

/// Checks `Γ_{gE} ⊊ A^{gE}` on every tile of a verified tiling and, when it
/// holds, that the window value on the largest Følner box contained in the
/// region is below the full value.
pub fn check_condition_c(ca: &CellularAutomaton, tiling: &Tiling) -> Result<ConditionC> {
    if !tiling.disjoint || !tiling.interior_covered {
        return Err(Error::InvalidArgument("tiling fails its own verification".into()));
    }
    let u = ca.universe();
    let region: std::collections::HashSet<&GroupElement> = tiling.region.iter().collect();
    let mut largest = None;
    for i in 0..24 {
        let Ok(b) = u.folner_box(i) else { break };
        if !b.elements.iter().all(|g| region.contains(g)) {
            break;
        }
        largest = Some(b);
    }
    let folner = largest.ok_or_else(|| Error::RegionTooSmall("no Følner box fits in the tiled region".into()))?;
    let mut proper_tiles = 0;
    for g in &tiling.centres {
        let tile: Vec<GroupElement> = tiling.shape.iter().map(|e| u.mul(g, e)).collect();
        if is_proper(ca, &window_dim(ca, &tile)?) {
            proper_tiles += 1;
        }
    }
    let holds = proper_tiles == tiling.centres.len();
    let strictly_below = if holds {
        Some(is_proper(ca, &window_dim(ca, &folner.elements)?))
    } else {
        None
    };
    Ok(ConditionC {
        tiles: tiling.centres.len(),
        proper_tiles,
        holds,
        box_sites: folner.elements.len(),
        strictly_below,
    })
}
