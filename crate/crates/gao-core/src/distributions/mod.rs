//! Terminal-state laws under the transformed pricing measure: scaled
//! non-central chi-square (per square-root factor) and non-central Wishart.

mod ncwishart;
mod ncx2;

pub use ncwishart::{NoncentralWishartLaw, TraceForm};
pub use ncx2::NoncentralChiSquareScaled;
