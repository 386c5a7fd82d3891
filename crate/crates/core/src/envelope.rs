//! Lower envelope of pairwise disjoint x-monotone chains.
//!
//! Chains are pushed in input order onto a [`RunStack`](crate::runstack::RunStack)
//! weighted by segment count, and adjacent envelopes are merged by a linear
//! sweep over their breakpoints. Because the chains do not cross, the
//! envelope can only change hands at a chain vertex, so every breakpoint is
//! an input abscissa.
//!
//! The merge is generic over an [`EnvelopeSpace`] so the visibility module can
//! run the same machinery with angles for abscissas and distances for heights.

use std::cmp::Ordering;

use serde::Serialize;

use crate::geometry::{Frac, Point2, Segment2};
use crate::ledger::WorkLedger;
use crate::runstack::RunStack;
use crate::{Error, Result};

/// An ordered domain and a family of functions over it.
pub(crate) trait EnvelopeSpace {
    type Pos: Copy + Ord + std::fmt::Debug;
    type Item: Copy + PartialEq + std::fmt::Debug;

    /// Compare the values of two items at a position where both are defined.
    fn compare_at(&self, a: &Self::Item, b: &Self::Item, at: Self::Pos) -> Ordering;
}

/// One function restricted to the closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Piece<P, I> {
    pub item: I,
    pub lo: P,
    pub hi: P,
}

/// Merge two envelopes. Pieces are sorted, have disjoint interiors and may
/// be single points; the value at a shared endpoint is the minimum of the
/// pieces touching it.
pub(crate) fn merge<S: EnvelopeSpace>(
    space: &S,
    a: Vec<Piece<S::Pos, S::Item>>,
    b: Vec<Piece<S::Pos, S::Item>>,
    ledger: &mut WorkLedger,
) -> Result<Vec<Piece<S::Pos, S::Item>>> {
    if a.is_empty() {
        return Ok(b);
    }
    if b.is_empty() {
        return Ok(a);
    }
    let (sa, pa): (Vec<_>, Vec<_>) = a.into_iter().partition(|p| p.lo < p.hi);
    let (sb, pb): (Vec<_>, Vec<_>) = b.into_iter().partition(|p| p.lo < p.hi);

    let cuts = merged_cuts(&sa, &sb, ledger);
    let mut spans: Vec<Piece<S::Pos, S::Item>> = Vec::with_capacity(sa.len() + sb.len());
    let (mut ia, mut ib) = (0, 0);
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let cover = |s: &[Piece<S::Pos, S::Item>], i: &mut usize| {
            while *i < s.len() && s[*i].hi <= lo {
                *i += 1;
            }
            (*i < s.len() && s[*i].lo <= lo).then(|| s[*i].item)
        };
        let winner = match (cover(&sa, &mut ia), cover(&sb, &mut ib)) {
            (Some(x), Some(y)) => {
                ledger.orientation_tests += 2;
                let (l, h) = (space.compare_at(&x, &y, lo), space.compare_at(&x, &y, hi));
                if l == Ordering::Equal || h == Ordering::Equal || l != h {
                    return Err(Error::pre(format!("chains cross or touch between {lo:?} and {hi:?}")));
                }
                if l == Ordering::Less {
                    x
                } else {
                    y
                }
            }
            (Some(x), None) => x,
            (None, Some(y)) => y,
            (None, None) => continue,
        };
        match spans.last_mut() {
            Some(last) if last.item == winner && last.hi == lo => last.hi = hi,
            _ => spans.push(Piece { item: winner, lo, hi }),
        }
    }

    // isolated points survive only where they are strictly lowest
    let mut points: Vec<Piece<S::Pos, S::Item>> = Vec::new();
    let mut all_points = pa;
    all_points.extend(pb);
    all_points.sort_by_key(|p| p.lo);
    let mut k = 0;
    for p in all_points {
        while k < spans.len() && spans[k].hi < p.lo {
            k += 1;
        }
        let mut lowest = true;
        for s in spans[k..].iter().take_while(|s| s.lo <= p.lo) {
            ledger.orientation_tests += 1;
            match space.compare_at(&p.item, &s.item, p.lo) {
                Ordering::Equal => return Err(Error::pre(format!("chains touch at {:?}", p.lo))),
                Ordering::Greater => lowest = false,
                Ordering::Less => {}
            }
        }
        if let Some(prev) = points.last_mut().filter(|q| q.lo == p.lo) {
            match space.compare_at(&p.item, &prev.item, p.lo) {
                Ordering::Equal => return Err(Error::pre(format!("chains touch at {:?}", p.lo))),
                Ordering::Less if lowest => *prev = p,
                _ => {}
            }
        } else if lowest {
            points.push(p);
        }
    }

    if points.is_empty() {
        return Ok(spans);
    }
    let mut out = Vec::with_capacity(spans.len() + points.len());
    let mut pi = points.into_iter().peekable();
    for s in spans {
        while let Some(p) = pi.next_if(|p| p.lo <= s.lo) {
            out.push(p);
        }
        out.push(s);
    }
    out.extend(pi);
    Ok(out)
}

fn merged_cuts<P: Copy + Ord, I>(a: &[Piece<P, I>], b: &[Piece<P, I>], ledger: &mut WorkLedger) -> Vec<P> {
    let ends = |s: &[Piece<P, I>]| s.iter().flat_map(|p| [p.lo, p.hi]).collect::<Vec<P>>();
    let (ea, eb) = (ends(a), ends(b));
    let mut out = Vec::with_capacity(ea.len() + eb.len());
    let (mut i, mut j) = (0, 0);
    while i < ea.len() || j < eb.len() {
        let next = if j == eb.len() || (i < ea.len() && ea[i] <= eb[j]) {
            i += 1;
            ea[i - 1]
        } else {
            j += 1;
            eb[j - 1]
        };
        ledger.comparisons += 1;
        if out.last() != Some(&next) {
            out.push(next);
        }
    }
    out
}

type Pieces<S> = Vec<Piece<<S as EnvelopeSpace>::Pos, <S as EnvelopeSpace>::Item>>;

/// Drive the run stack over a sequence of envelopes.
pub(crate) fn stack_merge<S: EnvelopeSpace>(
    space: &S,
    runs: Vec<(Pieces<S>, u64)>,
    ledger: &mut WorkLedger,
) -> Result<(Pieces<S>, StackReport)> {
    let mut stack = RunStack::new();
    let mut merge_fn = |x, y| merge(space, x, y, ledger);
    for (run, w) in runs {
        stack.push(run, w.max(1), &mut merge_fn)?;
    }
    let mut report = StackReport {
        weights_trace: std::mem::take(&mut stack.trace),
        max_height: stack.max_height,
        merges: stack.merges,
        fallback_merges: stack.fallback_merges,
        total_weight: 0,
    };
    let last = stack.finish(&mut merge_fn)?;
    let (pieces, total) = last.unwrap_or_default();
    report.total_weight = total;
    Ok((pieces, report))
}

/// What the run stack did during one envelope computation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StackReport {
    /// Bottom-to-top weights after each push.
    pub weights_trace: Vec<Vec<u64>>,
    pub max_height: usize,
    pub merges: u64,
    pub fallback_merges: u64,
    pub total_weight: u64,
}

/// An x-monotone polygonal chain with strictly increasing abscissas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneChain {
    vertices: Vec<Point2>,
}

impl MonotoneChain {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::malformed("empty chain"));
        }
        if vertices.windows(2).any(|w| w[0].x >= w[1].x) {
            return Err(Error::pre("chain abscissas must strictly increase"));
        }
        Ok(MonotoneChain { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// A segment of the envelope with the chain it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sourced {
    pub segment: Segment2,
    pub chain: usize,
}

pub type EnvelopePiece = Piece<i64, Sourced>;

struct Plane;

impl EnvelopeSpace for Plane {
    type Pos = i64;
    type Item = Sourced;

    fn compare_at(&self, a: &Sourced, b: &Sourced, x: i64) -> Ordering {
        a.segment.value_at(x).cmp(&b.segment.value_at(x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Envelope {
    pub pieces: Vec<EnvelopePiece>,
}

impl Envelope {
    /// Envelope height at abscissa `x2 / 2`, or `None` in a gap.
    pub fn value_at_half(&self, x2: i128) -> Option<Frac> {
        // sorted by left end; isolated points may sit inside a span, so walk
        // back until a span ends left of x
        let i = self.pieces.partition_point(|p| 2 * (p.lo as i128) <= x2);
        let mut best: Option<Frac> = None;
        for p in self.pieces[..i].iter().rev() {
            let hi2 = 2 * p.hi as i128;
            if hi2 >= x2 {
                let v = p.item.segment.value_at_half(x2);
                best = Some(best.map_or(v, |b| b.min(v)));
            } else if p.lo < p.hi {
                break;
            }
        }
        best
    }

    /// Every abscissa where a piece starts or ends.
    pub fn breakpoints(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.pieces.iter().flat_map(|p| [p.lo, p.hi]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn chain_pieces(c: &MonotoneChain, id: usize) -> Vec<EnvelopePiece> {
    let v = c.vertices();
    if v.len() == 1 {
        let segment = Segment2::new(v[0], v[0]);
        return vec![Piece { item: Sourced { segment, chain: id }, lo: v[0].x, hi: v[0].x }];
    }
    v.windows(2)
        .map(|w| Piece { item: Sourced { segment: Segment2::new(w[0], w[1]), chain: id }, lo: w[0].x, hi: w[1].x })
        .collect()
}

/// Merge two envelopes of disjoint chains into their pointwise minimum.
pub fn merge_envelopes(a: &Envelope, b: &Envelope) -> Result<Envelope> {
    let pieces = merge(&Plane, a.pieces.clone(), b.pieces.clone(), &mut WorkLedger::new())?;
    Ok(Envelope { pieces })
}

/// Envelope of a single chain.
pub fn chain_envelope(chain: &MonotoneChain, id: usize) -> Envelope {
    Envelope { pieces: chain_pieces(chain, id) }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnvelopeOutput {
    pub envelope: Envelope,
    pub ledger: WorkLedger,
    pub stack: StackReport,
}

/// Lower envelope of chains taken in the given order.
pub fn lower_envelope(chains: &[MonotoneChain]) -> Result<EnvelopeOutput> {
    let mut ledger = WorkLedger::new();
    let runs = chains
        .iter()
        .enumerate()
        .map(|(i, c)| (chain_pieces(c, i), c.segment_count() as u64))
        .collect();
    let (pieces, stack) = stack_merge(&Plane, runs, &mut ledger)?;
    ledger.max_depth = stack.max_height;
    Ok(EnvelopeOutput { envelope: Envelope { pieces }, ledger, stack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::envelope_probe;

    fn chain(v: &[(i64, i64)]) -> MonotoneChain {
        MonotoneChain::new(v.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    fn check(chains: &[MonotoneChain], env: &Envelope) {
        let raw: Vec<Vec<Point2>> = chains.iter().map(|c| c.vertices().to_vec()).collect();
        let mut xs: Vec<i64> = raw.iter().flatten().map(|p| p.x).collect();
        xs.sort();
        xs.dedup();
        for x in (2 * xs[0] as i128 - 1)..=(2 * *xs.last().unwrap() as i128 + 1) {
            assert_eq!(env.value_at_half(x), envelope_probe(&raw, x), "at x2 = {x}");
        }
    }

    #[test]
    fn overhanging_pair() {
        let cs = [chain(&[(0, 0), (2, 0)]), chain(&[(1, 1), (3, 1)])];
        let e = lower_envelope(&cs).unwrap().envelope;
        assert_eq!(e.pieces.iter().map(|p| (p.lo, p.hi, p.item.chain)).collect::<Vec<_>>(), vec![(0, 2, 0), (2, 3, 1)]);
        check(&cs, &e);
    }

    #[test]
    fn hidden_chain_disappears() {
        let cs = [chain(&[(0, 5), (4, 5)]), chain(&[(0, 0), (4, 1)])];
        let e = lower_envelope(&cs).unwrap().envelope;
        assert_eq!(e.pieces.len(), 1);
        assert_eq!(e.pieces[0].item.chain, 1);
    }

    #[test]
    fn single_chain_keeps_its_weight() {
        let cs = [chain(&[(0, 0), (1, 3), (2, 1), (5, 2)])];
        let out = lower_envelope(&cs).unwrap();
        assert_eq!(out.envelope.pieces.len(), 3);
        assert_eq!(out.stack.total_weight, 3);
    }

    #[test]
    fn points_and_gaps() {
        let cs = [chain(&[(0, 4), (4, 4)]), chain(&[(2, 1)]), chain(&[(6, 0)]), chain(&[(4, 9), (8, 9)]), chain(&[(3, 7)])];
        let e = lower_envelope(&cs).unwrap().envelope;
        check(&cs, &e);
        assert_eq!(e.value_at_half(12), Some(Frac::new(0, 1)));
        assert_eq!(e.value_at_half(-1), None);
    }

    #[test]
    fn crossing_is_rejected() {
        let cs = [chain(&[(0, 0), (4, 4)]), chain(&[(0, 4), (4, 0)])];
        assert!(matches!(lower_envelope(&cs), Err(Error::Precondition(_))));
        let touching = [chain(&[(0, 0), (4, 4)]), chain(&[(4, 4), (6, 0)]), chain(&[(4, 4)])];
        assert!(lower_envelope(&touching[1..]).is_err());
    }

    #[test]
    fn bad_chains() {
        assert!(MonotoneChain::new(vec![]).is_err());
        assert!(MonotoneChain::new(vec![Point2::new(1, 0), Point2::new(1, 2)]).is_err());
    }
}
