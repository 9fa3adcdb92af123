//! Finite unions of closed intervals of the extended real line, plus a list
//! of isolated points.

use std::cmp::Ordering;

use serde::ser::{Serialize, SerializeSeq, Serializer};

/// An endpoint in `R ∪ {−∞, +∞}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound<T> {
    NegInf,
    Finite(T),
    PosInf,
}

impl<T: PartialOrd> PartialOrd for Bound<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use Bound::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Some(Ordering::Equal),
            (NegInf, _) | (_, PosInf) => Some(Ordering::Less),
            (_, NegInf) | (PosInf, _) => Some(Ordering::Greater),
            (Finite(a), Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl<T: Copy> Bound<T> {
    pub fn finite(&self) -> Option<T> {
        match self {
            Bound::Finite(x) => Some(*x),
            _ => None,
        }
    }
}

impl<T: Serialize> Serialize for Bound<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::NegInf => s.serialize_str("-inf"),
            Bound::PosInf => s.serialize_str("inf"),
            Bound::Finite(x) => x.serialize(s),
        }
    }
}

/// The closed interval `[lo, hi]`; infinite endpoints are excluded from the
/// set as usual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval<T> {
    pub lo: Bound<T>,
    pub hi: Bound<T>,
}

impl<T: PartialOrd + Copy> Interval<T> {
    /// `None` when `lo > hi` or an endpoint is not comparable (NaN).
    pub fn new(lo: Bound<T>, hi: Bound<T>) -> Option<Self> {
        match lo.partial_cmp(&hi)? {
            Ordering::Greater => None,
            _ => Some(Self { lo, hi }),
        }
    }

    pub fn closed(lo: T, hi: T) -> Option<Self> {
        Self::new(Bound::Finite(lo), Bound::Finite(hi))
    }

    pub fn at_most(hi: T) -> Self {
        Self {
            lo: Bound::NegInf,
            hi: Bound::Finite(hi),
        }
    }

    pub fn at_least(lo: T) -> Self {
        Self {
            lo: Bound::Finite(lo),
            hi: Bound::PosInf,
        }
    }

    pub fn everything() -> Self {
        Self {
            lo: Bound::NegInf,
            hi: Bound::PosInf,
        }
    }

    pub fn contains(&self, x: T) -> bool {
        let x = Bound::Finite(x);
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interior(&self, x: T) -> bool {
        let x = Bound::Finite(x);
        self.lo < x && x < self.hi
    }

    pub fn is_everything(&self) -> bool {
        self.lo == Bound::NegInf && self.hi == Bound::PosInf
    }
}

impl<T: Serialize> Serialize for Interval<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&self.lo)?;
        seq.serialize_element(&self.hi)?;
        seq.end()
    }
}

/// A spectrum: closed intervals (essential part) and isolated points.
///
/// Every constructor normalizes: intervals are sorted, overlapping or touching
/// ones are merged, and points lying in an interval are dropped.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SpectrumSet<T> {
    intervals: Vec<Interval<T>>,
    eigenvalues: Vec<T>,
}

fn cmp<T: PartialOrd>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

impl<T: PartialOrd + Copy> SpectrumSet<T> {
    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
            eigenvalues: Vec::new(),
        }
    }

    pub fn new(intervals: Vec<Interval<T>>, eigenvalues: Vec<T>) -> Self {
        let mut s = Self {
            intervals,
            eigenvalues,
        };
        s.normalize();
        s
    }

    pub fn from_intervals(intervals: Vec<Interval<T>>) -> Self {
        Self::new(intervals, Vec::new())
    }

    pub fn real_line() -> Self {
        Self::from_intervals(vec![Interval::everything()])
    }

    pub fn intervals(&self) -> &[Interval<T>] {
        &self.intervals
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn is_real_line(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0].is_everything()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.eigenvalues.is_empty()
    }

    pub fn contains(&self, x: T) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x)) || self.eigenvalues.contains(&x)
    }

    /// Whether every point of `other` also belongs to `self`.
    pub fn includes(&self, other: &Self) -> bool {
        other
            .intervals
            .iter()
            .all(|o| self.intervals.iter().any(|s| s.lo <= o.lo && o.hi <= s.hi))
            && other.eigenvalues.iter().all(|&e| self.contains(e))
    }

    fn normalize(&mut self) {
        let mut ivs = std::mem::take(&mut self.intervals);
        ivs.sort_by(|a, b| cmp(&a.lo, &b.lo).then(cmp(&a.hi, &b.hi)));
        let mut merged: Vec<Interval<T>> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        let mut ev = std::mem::take(&mut self.eigenvalues);
        ev.sort_by(cmp);
        ev.dedup();
        ev.retain(|&e| !merged.iter().any(|iv| iv.contains(e)));
        self.intervals = merged;
        self.eigenvalues = ev;
    }

    pub fn union(&self, other: &Self) -> Self {
        union([self, other])
    }
}

/// Normalized union of any number of sets.
pub fn union<'a, T, I>(sets: I) -> SpectrumSet<T>
where
    T: PartialOrd + Copy + 'a,
    I: IntoIterator<Item = &'a SpectrumSet<T>>,
{
    let mut ivs = Vec::new();
    let mut ev = Vec::new();
    for s in sets {
        ivs.extend_from_slice(&s.intervals);
        ev.extend_from_slice(&s.eigenvalues);
    }
    SpectrumSet::new(ivs, ev)
}
