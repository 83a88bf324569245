//! Exact polynomial and truncated power-series arithmetic, uni- and bivariate,
//! plus the product-form representation of rational generating functions.

mod euler;
mod poly;
mod product;
mod truncated;

pub use euler::{infer_product_form, EulerProduct};
pub use poly::{Exponent, Polynomial};
pub use product::{MonomialMap, ProductForm};
pub use truncated::TruncatedSeries;
