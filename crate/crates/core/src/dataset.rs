//! Capped FIFO stores for evaluated points and approximate gradients.
//!
//! Both datasets keep entries in insertion (age) order, evict the oldest
//! entry first when the cap is reached, and treat an insert at an already
//! stored point as a replacement that refreshes the entry's age. Points are
//! compared by exact coordinate equality.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A stored `(point, value)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueEntry {
    pub point: Vec<f64>,
    pub value: f64,
}

/// Ordered store of `(point, f(point))` pairs with a FIFO cap.
#[derive(Debug, Clone)]
pub struct ValueDataset {
    entries: VecDeque<ValueEntry>,
    cap: usize,
}

impl ValueDataset {
    /// Creates an empty dataset holding at most `cap` entries.
    pub fn new(cap: usize) -> Self {
        assert!(cap > 0, "dataset cap must be positive");
        Self {
            entries: VecDeque::new(),
            cap,
        }
    }

    /// Inserts `(point, value)`. A duplicate point replaces the stored value
    /// and moves to the back (youngest); otherwise the oldest entry is evicted
    /// once the cap is reached.
    pub fn insert(&mut self, point: Vec<f64>, value: f64) {
        if let Some(pos) = self.entries.iter().position(|e| e.point == point) {
            self.entries.remove(pos);
        } else if self.entries.len() == self.cap {
            self.entries.pop_front();
        }
        self.entries.push_back(ValueEntry { point, value });
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Entries in age order (oldest first).
    pub fn iter(&self) -> impl Iterator<Item = &ValueEntry> {
        self.entries.iter()
    }
}

/// A stored `(point, gradient, step)` triple; `h` is the finite-difference
/// step that produced the gradient approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct GradEntry {
    pub point: Vec<f64>,
    pub grad: Vec<f64>,
    pub h: f64,
}

/// Ordered store of approximate gradients with the same cap/FIFO/dedup rules
/// as [`ValueDataset`].
#[derive(Debug, Clone)]
pub struct GradDataset {
    entries: VecDeque<GradEntry>,
    cap: usize,
}

impl GradDataset {
    pub fn new(cap: usize) -> Self {
        assert!(cap > 0, "dataset cap must be positive");
        Self {
            entries: VecDeque::new(),
            cap,
        }
    }

    pub fn insert(&mut self, point: Vec<f64>, grad: Vec<f64>, h: f64) -> Result<()> {
        if point.len() != grad.len() {
            return Err(Error::DimensionMismatch {
                expected: point.len(),
                got: grad.len(),
            });
        }
        if let Some(pos) = self.entries.iter().position(|e| e.point == point) {
            self.entries.remove(pos);
        } else if self.entries.len() == self.cap {
            self.entries.pop_front();
        }
        self.entries.push_back(GradEntry { point, grad, h });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn iter(&self) -> impl Iterator<Item = &GradEntry> {
        self.entries.iter()
    }
}
