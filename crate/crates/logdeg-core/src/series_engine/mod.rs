//! Exact truncated Laurent series, rational functions in q, the MacMahon function,
//! Padé-based rationality testing, and the −q = e^{iu} comparison.

mod compare;
mod laurent;
mod macmahon;
mod rational;

pub use compare::{exp_series, gw_dt_compare, substitute_neg_exp_iu, CompareReport};
pub use laurent::{GSeries, LaurentSeries, QSeries, SeriesRepr, Var};
pub use macmahon::{macmahon, macmahon_power, normalize_dt};
pub use rational::{expand_rational, pade_reconstruct, Polynomial, RationalFunction, RationalRepr};
