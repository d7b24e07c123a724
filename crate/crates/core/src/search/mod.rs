//! Enumeration of GL-normalized non-singular colorings.
//!
//! Two engines produce the same sorted output: depth-first recursion over
//! facets in label order, and block pasting, which joins the local colorings
//! of every facet's block in a fixed sequence.

mod pasting;
mod recursion;

pub use pasting::{
    block_pasting, derived_block_set, fixing_set, paste, pasting_sequence, rearrange_order, unfix_set,
    BlockSet, PastingPlan,
};
pub use recursion::{color_recursion, prefix_search, RecursionPlan};

use crate::coloring::{is_locally_nonsingular, Color, ColoringVector};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::polytopes::Polytope;
use crate::symmetries::TransferSelection;

pub const DEFAULT_SPLIT_THRESHOLD: usize = 120_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Recursion,
    BlockPaste,
}

#[derive(Clone, Debug)]
pub struct SearchTask<'a> {
    pub polytope: &'a Polytope,
    /// Sorted, duplicate-free, nonzero colors below `2^n`.
    pub palette: Vec<Color>,
    /// Pin the first `n` facets to the standard basis.
    pub normalize: bool,
    /// Keep only vectors that use every palette color.
    pub exact: bool,
    /// 0-based facet and color.
    pub fixed: Vec<(usize, Color)>,
    pub split_threshold: usize,
    pub transfer: TransferSelection,
    pub execution: Execution,
}

impl<'a> SearchTask<'a> {
    pub fn new(polytope: &'a Polytope, palette: &[Color]) -> Self {
        let mut palette = palette.to_vec();
        palette.sort_unstable();
        palette.dedup();
        Self {
            polytope,
            palette,
            normalize: true,
            exact: false,
            fixed: Vec::new(),
            split_threshold: DEFAULT_SPLIT_THRESHOLD,
            transfer: TransferSelection::LexMin,
            execution: Execution::default(),
        }
    }

    pub fn unnormalized(mut self) -> Self {
        self.normalize = false;
        self
    }

    /// A k-coloring task: all k palette colors must occur.
    pub fn exact(mut self) -> Self {
        self.exact = true;
        self
    }

    pub fn with_fixed(mut self, fixed: Vec<(usize, Color)>) -> Self {
        self.fixed = fixed;
        self
    }

    pub fn with_threshold(mut self, t: usize) -> Self {
        self.split_threshold = t;
        self
    }

    pub fn with_transfer(mut self, sel: TransferSelection) -> Self {
        self.transfer = sel;
        self
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.execution = exec;
        self
    }

    pub fn bits(&self) -> usize {
        self.polytope.dimension()
    }

    /// Per-facet forced colors, `0` where free.
    pub fn forced_colors(&self) -> Result<Vec<Color>> {
        let p = self.polytope;
        let n = p.dimension();
        let m = p.facet_count();
        if n > crate::coloring::MAX_BITS {
            return Err(Error::InvalidTask(format!("dimension {n} exceeds supported color width")));
        }
        if self.split_threshold == 0 {
            return Err(Error::InvalidTask("split threshold must be positive".into()));
        }
        if let Some(&c) = self.palette.iter().find(|&&c| c == 0 || (c as usize) >= 1 << n) {
            return Err(Error::InvalidTask(format!("color {c} is outside Z2^{n}")));
        }
        let mut forced = vec![0u8; m];
        if self.normalize {
            for (k, slot) in forced.iter_mut().enumerate().take(n) {
                if !self.palette.contains(&(1 << k)) {
                    return Err(Error::InvalidTask(format!("palette lacks basis color {}", 1 << k)));
                }
                for j in 0..k {
                    if !p.is_adjacent(j, k) {
                        return Err(Error::InvalidTask("the first n facets are not mutually adjacent".into()));
                    }
                }
                *slot = 1 << k;
            }
        }
        for &(f, c) in &self.fixed {
            if f >= m {
                return Err(Error::InvalidTask(format!("fixed facet {} out of range", f + 1)));
            }
            if !self.palette.contains(&c) {
                return Err(Error::InvalidTask(format!("fixed color {c} not in palette")));
            }
            if forced[f] != 0 && forced[f] != c {
                return Err(Error::InvalidTask(format!("conflicting colors for facet {}", f + 1)));
            }
            forced[f] = c;
        }
        if !is_locally_nonsingular(p, &forced) {
            return Err(Error::InvalidTask("fixed colors are singular at some vertex".into()));
        }
        Ok(forced)
    }

    pub fn palette_mask(&self) -> u64 {
        self.palette.iter().fold(0, |m, &c| m | 1 << c)
    }

    pub(crate) fn accepts(&self, colors: &[Color]) -> bool {
        !self.exact || colors.iter().fold(0u64, |m, &c| m | 1 << c) == self.palette_mask()
    }
}

/// Runs the requested engine.
pub fn enumerate(task: &SearchTask<'_>, engine: Engine) -> Result<Vec<ColoringVector>> {
    match engine {
        Engine::Recursion => color_recursion(task),
        Engine::BlockPaste => block_pasting(task),
    }
}
