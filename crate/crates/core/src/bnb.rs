//! Interval branch-and-bound for univariate global minima.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::interval::{Diff, Interval, Scalar};
use crate::{Error, Result};

/// A function that can be evaluated pointwise and over intervals.
pub trait Objective: Sync {
    fn point(&self, x: f64) -> f64;

    /// Enclosure of the range of the function over `x`.
    fn enclose(&self, x: Interval) -> Interval;

    /// Enclosure of the (generalized) derivative over `x`, when available.
    fn derivative(&self, _x: Interval) -> Option<Interval> {
        None
    }

    /// Certified lower bound of the function on `[from, ∞)`.
    fn tail_lower_bound(&self, _from: f64) -> Option<f64> {
        None
    }
}

/// A function written once against [`Scalar`] and evaluated at every
/// precision level.
pub trait UnivariateFn: Sync {
    fn eval<S: Scalar>(&self, x: S) -> S;

    fn tail_lower_bound(&self, _from: f64) -> Option<f64> {
        None
    }
}

impl<F: UnivariateFn> Objective for F {
    fn point(&self, x: f64) -> f64 {
        self.eval(x)
    }

    fn enclose(&self, x: Interval) -> Interval {
        self.eval(x)
    }

    fn derivative(&self, x: Interval) -> Option<Interval> {
        Some(self.eval(Diff::variable(x)).d)
    }

    fn tail_lower_bound(&self, from: f64) -> Option<f64> {
        UnivariateFn::tail_lower_bound(self, from)
    }
}

/// Closed interval reported by the certifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

impl From<Interval> for Enclosure {
    fn from(x: Interval) -> Self {
        Enclosure { lo: x.lo(), hi: x.hi() }
    }
}

impl From<Enclosure> for Interval {
    fn from(e: Enclosure) -> Self {
        Interval::new(e.lo, e.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BnbConfig {
    /// Target width of the enclosure of the minimum.
    pub tol: f64,
    /// Target width of the argmin bracket; `None` means `sqrt(tol)`.
    pub argmin_tol: Option<f64>,
    /// Maximum number of bisections.
    pub max_splits: usize,
    /// Largest cutoff tried on half-line domains.
    pub max_cutoff: f64,
}

impl Default for BnbConfig {
    fn default() -> Self {
        BnbConfig { tol: 1e-9, argmin_tol: None, max_splits: 2_000_000, max_cutoff: 1e6 }
    }
}

impl BnbConfig {
    pub fn with_tol(tol: f64) -> Self {
        BnbConfig { tol, ..Default::default() }
    }

    fn argmin_width(&self) -> f64 {
        self.argmin_tol.unwrap_or_else(|| self.tol.sqrt())
    }
}

/// Result of a certification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifiedMin {
    pub function: String,
    /// Lower and upper end of the searched domain (`hi` may be infinite).
    pub domain: (f64, f64),
    pub min: Enclosure,
    pub argmin_bracket: Enclosure,
    pub subdivisions: usize,
    /// False when the split budget ran out before the targets were met.
    pub complete: bool,
    /// Finite cutoff used for a half-line domain.
    pub tail_cutoff: Option<f64>,
}

impl CertifiedMin {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.function = label.into();
        self
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    x: Interval,
    lo: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    // reversed so the max-heap pops the smallest lower bound first
    fn cmp(&self, other: &Self) -> Ordering {
        other.lo.total_cmp(&self.lo).then_with(|| other.x.lo().total_cmp(&self.x.lo()))
    }
}

fn is_atomic(x: &Interval) -> bool {
    let m = x.mid();
    m <= x.lo() || m >= x.hi()
}

/// Lower bound of `obj` over `x`: the naive enclosure, sharpened by
/// monotonicity or the mean-value form when a derivative is available.
fn lower_bound(obj: &dyn Objective, x: Interval) -> f64 {
    let mut lo = obj.enclose(x).lo();
    if let Some(d) = obj.derivative(x) {
        let refined = if d.lo() >= 0.0 {
            obj.enclose(Interval::point(x.lo())).lo()
        } else if d.hi() <= 0.0 {
            obj.enclose(Interval::point(x.hi())).lo()
        } else {
            let c = x.mid();
            let mv = obj.enclose(Interval::point(c)) + d * (x - Interval::point(c));
            mv.lo()
        };
        if !refined.is_nan() {
            lo = lo.max(refined);
        }
    }
    lo
}

struct Search<'a> {
    obj: &'a dyn Objective,
    upper: f64,
    best_x: f64,
    splits: usize,
}

impl Search<'_> {
    fn probe(&mut self, x: f64) {
        let u = self.obj.enclose(Interval::point(x)).hi();
        if u < self.upper {
            self.upper = u;
            self.best_x = x;
        }
    }

    fn cell(&mut self, x: Interval) -> Cell {
        self.probe(x.mid());
        Cell { x, lo: lower_bound(self.obj, x) }
    }
}

/// Certified global minimum of `obj` on the bounded interval `[a, b]`.
pub fn certify_min(obj: &dyn Objective, a: f64, b: f64, cfg: &BnbConfig) -> Result<CertifiedMin> {
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("bounded domain required, got [{a}, {b}]")));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", cfg.tol)));
    }
    let mut s = Search { obj, upper: f64::INFINITY, best_x: a, splits: 0 };
    s.probe(a);
    s.probe(b);
    let root = s.cell(Interval::new(a, b));

    let mut heap = BinaryHeap::new();
    let mut atoms: Vec<Cell> = Vec::new();
    let mut atom_floor = f64::INFINITY;
    heap.push(root);
    let mut complete = true;

    // phase 1: close the gap between the incumbent and the lowest bound
    loop {
        let floor = heap.peek().map_or(f64::INFINITY, |c| c.lo).min(atom_floor);
        if s.upper - floor <= cfg.tol {
            break;
        }
        let Some(cell) = heap.pop() else {
            complete = false;
            break;
        };
        if cell.lo > s.upper {
            continue;
        }
        if s.splits >= cfg.max_splits {
            heap.push(cell);
            complete = false;
            break;
        }
        s.splits += 1;
        let (l, r) = cell.x.bisect();
        for half in [l, r] {
            let c = s.cell(half);
            if c.lo <= s.upper {
                if is_atomic(&c.x) {
                    atom_floor = atom_floor.min(c.lo);
                    atoms.push(c);
                } else {
                    heap.push(c);
                }
            }
        }
    }

    // phase 2: shrink the set of boxes that may still hold the minimizer
    let mut cells: Vec<Cell> = heap.into_vec();
    cells.extend(atoms);
    let target = cfg.argmin_width();
    while complete {
        let upper = s.upper;
        cells.retain(|c| c.lo <= upper);
        let hull = hull_of(&cells);
        if hull.width() <= target {
            break;
        }
        let widest = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| !is_atomic(&c.x))
            .max_by(|(_, p), (_, q)| p.x.width().total_cmp(&q.x.width()).then_with(|| q.x.lo().total_cmp(&p.x.lo())))
            .map(|(i, _)| i);
        let Some(i) = widest else {
            complete = false;
            break;
        };
        if s.splits >= cfg.max_splits {
            complete = false;
            break;
        }
        s.splits += 1;
        let cell = cells.swap_remove(i);
        let (l, r) = cell.x.bisect();
        cells.push(s.cell(l));
        cells.push(s.cell(r));
    }

    let upper = s.upper;
    cells.retain(|c| c.lo <= upper);
    let floor = cells.iter().map(|c| c.lo).fold(f64::INFINITY, f64::min).min(upper);
    let bracket = if cells.is_empty() { Interval::point(s.best_x) } else { hull_of(&cells) };
    Ok(CertifiedMin {
        function: String::new(),
        domain: (a, b),
        min: Enclosure { lo: floor, hi: upper },
        argmin_bracket: bracket.into(),
        subdivisions: s.splits,
        complete: complete && upper - floor <= cfg.tol,
        tail_cutoff: None,
    })
}

fn hull_of(cells: &[Cell]) -> Interval {
    let lo = cells.iter().map(|c| c.x.lo()).fold(f64::INFINITY, f64::min);
    let hi = cells.iter().map(|c| c.x.hi()).fold(f64::NEG_INFINITY, f64::max);
    if lo <= hi {
        Interval::new(lo, hi)
    } else {
        Interval::point(0.0)
    }
}

/// Certified global minimum on `[a, ∞)`.
///
/// A cutoff `Y` is doubled until the objective's tail bound on `[Y, ∞)`
/// exceeds its value at `a`; the bounded search on `[a, Y]` then covers the
/// whole half-line.
pub fn certify_min_half_line(obj: &dyn Objective, a: f64, cfg: &BnbConfig) -> Result<CertifiedMin> {
    let anchor = obj.enclose(Interval::point(a)).hi();
    let mut y = (2.0 * a).max(a + 1.0).max(1.0);
    loop {
        if let Some(t) = obj.tail_lower_bound(y) {
            if t > anchor {
                break;
            }
        }
        y *= 2.0;
        if y > cfg.max_cutoff {
            let mut r = certify_min(obj, a, cfg.max_cutoff, cfg)?;
            r.domain = (a, f64::INFINITY);
            r.complete = false;
            r.tail_cutoff = None;
            return Ok(r);
        }
    }
    let mut r = certify_min(obj, a, y, cfg)?;
    r.domain = (a, f64::INFINITY);
    r.tail_cutoff = Some(y);
    Ok(r)
}

/// Uniform grid scan with `n` points on `[a, b]`: `(min, argmin)`.
pub fn grid_scan(obj: &dyn Objective, a: f64, b: f64, n: usize) -> (f64, f64) {
    assert!(n >= 2, "grid needs at least two points");
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let x = if i == n - 1 { b } else { a + step * i as f64 };
            (obj.point(x), x)
        })
        .fold((f64::INFINITY, a), |best, cur| if cur.0 < best.0 { cur } else { best })
}
