//! Small groupoids used throughout the tests, the self-test and the docs.

use crate::group::FiniteGroup;
use crate::groupoid::{ArrId, FiniteGroupoid, ObjId};

/// One object, identity arrow only.
pub fn t1() -> FiniteGroupoid {
    FiniteGroupoid::from_group(&FiniteGroup::cyclic(1), "*")
}

/// Codiscrete groupoid on `{x, y}`: arrows `1x`, `1y`, `a: y → x`, `a-: x → y`.
pub fn i2() -> FiniteGroupoid {
    let (x, y) = (ObjId(0), ObjId(1));
    let arrows = vec![
        ("1x".to_string(), x, x),
        ("1y".to_string(), y, y),
        ("a".to_string(), y, x),
        ("a-".to_string(), x, y),
    ];
    FiniteGroupoid::build_validated(vec!["x".into(), "y".into()], arrows, |f, h| {
        match (f.0, h.0) {
            (0, h) => ArrId(h),
            (f, 1) => ArrId(f),
            (1, h) => ArrId(h),
            (f, 0) => ArrId(f),
            (2, 3) => ArrId(0),
            (3, 2) => ArrId(1),
            _ => unreachable!("not composable"),
        }
    })
    .expect("I2 is a groupoid")
}

/// One object whose loops form the cyclic group of order 4 (arrows `0..=3`).
pub fn c4() -> FiniteGroupoid {
    FiniteGroupoid::from_group(&FiniteGroup::cyclic(4), "*")
}

/// One object whose loops form the symmetric group on three letters; arrows
/// are labelled in cycle notation.
pub fn s3() -> FiniteGroupoid {
    FiniteGroupoid::from_group(&FiniteGroup::symmetric(3), "*")
}

/// The fixture groupoids by name.
pub fn all() -> Vec<(&'static str, FiniteGroupoid)> {
    vec![("T1", t1()), ("I2", i2()), ("C4", c4()), ("S3", s3())]
}
