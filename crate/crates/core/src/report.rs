//! Serialization helpers shared by reports: exact rationals render as "p/q".

use serde::Serializer;

use crate::geometry::Rational;

/// "p/q", or just "p" for integers. Never a decimal.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

pub fn ser_rationals<S: Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(fmt_rational))
}

pub fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_rational(r, s),
        None => s.serialize_none(),
    }
}
