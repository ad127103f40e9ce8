//! Visualizations of attention matrices.
//!
//! [`text`] draws a shaded grid for terminals; [`svg`] draws token rows
//! joined by alignment lines whose opacity follows the attention weight.
//! Output is a pure function of the input: no timestamps, no randomness.

pub mod svg;
pub mod text;

pub use svg::{render_comparison_svg, render_record_svg, DRAW_THRESHOLD};
pub use text::{render_matrix_text, RenderOptions};

use crate::alignment::AttentionMatrix;

/// Weight that maps to full intensity: 1 for ordinary attention, the largest
/// weight for matrices that exceed 1 (summed multi-layer attention).
pub(crate) fn intensity_scale(matrix: &AttentionMatrix) -> f64 {
    matrix.max_weight().max(1.0)
}
