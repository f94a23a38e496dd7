//! The T1 → T6 encoding. Each source triple (x, y, z) becomes one or two
//! triples with first component x, chosen by the equality pattern of
//! (x, y, z) and by whether x is the third component of the tuple keyed by y.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::relmodel::{lookup_by_column, Instance, Tuple, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum F0Case {
    I,
    IA,
    II,
    III,
    IIIA,
    IV,
    IVA,
    V,
}

impl F0Case {
    pub const ALL: [F0Case; 8] = [
        F0Case::I,
        F0Case::IA,
        F0Case::II,
        F0Case::III,
        F0Case::IIIA,
        F0Case::IV,
        F0Case::IVA,
        F0Case::V,
    ];

    pub fn label(self) -> &'static str {
        match self {
            F0Case::I => "i",
            F0Case::IA => "i-a",
            F0Case::II => "ii",
            F0Case::III => "iii",
            F0Case::IIIA => "iii-a",
            F0Case::IV => "iv",
            F0Case::IVA => "iv-a",
            F0Case::V => "v",
        }
    }
}

/// `r13_of_y` is the third component of the source tuple keyed by `y`, or
/// `None` when `y` keys no tuple (never equal to any value).
pub fn f0_case(x: Value, y: Value, z: Value, r13_of_y: Option<Value>) -> F0Case {
    let hit = r13_of_y == Some(x);
    match (x == y, x == z, y == z) {
        (true, true, _) => F0Case::IA,
        (true, false, _) => F0Case::I,
        (false, true, _) if hit => F0Case::IVA,
        (false, true, _) => F0Case::II,
        (false, false, true) if hit => F0Case::V,
        (false, false, true) => F0Case::IIIA,
        (false, false, false) if hit => F0Case::IV,
        (false, false, false) => F0Case::III,
    }
}

pub fn f0(x: Value, y: Value, z: Value, r13_of_y: Option<Value>) -> Vec<Tuple> {
    match f0_case(x, y, z, r13_of_y) {
        F0Case::IA => vec![vec![x, x, x]],
        F0Case::I => vec![vec![x, x, z]],
        F0Case::II => vec![vec![x, y, x]],
        F0Case::III | F0Case::IIIA => vec![vec![x, y, x], vec![x, x, z]],
        F0Case::IV => vec![vec![x, y, y], vec![x, x, z]],
        F0Case::IVA => vec![vec![x, y, y], vec![x, x, x]],
        F0Case::V => vec![vec![x, y, y]],
    }
}

pub(super) fn forward(inst: &Instance) -> Result<Instance> {
    let r13 = lookup_by_column(inst, 1, 3);
    let mut out = Instance::empty(3);
    for t in inst.tuples() {
        for u in f0(t[0], t[1], t[2], r13.get(&t[1]).copied()) {
            out.insert(u)?;
        }
    }
    Ok(out)
}

/// Equality type of an image triple (x, b, c) relative to its first component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Shape {
    /// (x, x, x)
    A,
    /// (x, x, c), c ≠ x
    B,
    /// (x, b, x), b ≠ x
    C,
    /// (x, b, b), b ≠ x
    D,
}

fn shape(t: &[Value]) -> Option<Shape> {
    let (x, b, c) = (t[0], t[1], t[2]);
    match (b == x, c == x, b == c) {
        (true, true, _) => Some(Shape::A),
        (true, false, _) => Some(Shape::B),
        (false, true, _) => Some(Shape::C),
        (false, false, true) => Some(Shape::D),
        (false, false, false) => None,
    }
}

/// Decodes each first-component group back to its source triple. The result
/// still has to be checked by re-applying `forward`.
pub(super) fn inverse(image: &Instance) -> Result<Instance> {
    let mut groups: BTreeMap<Value, Vec<&Tuple>> = BTreeMap::new();
    for t in image.tuples() {
        groups.entry(t[0]).or_default().push(t);
    }
    let bad = |x: Value| Error::Recovery(format!("no source triple decodes to the group of {}", x.default_name()));
    let mut out = Instance::empty(3);
    for (x, ts) in groups {
        let mut shaped: Vec<(Shape, &Tuple)> = Vec::with_capacity(ts.len());
        for t in ts {
            shaped.push((shape(t).ok_or_else(|| bad(x))?, t));
        }
        shaped.sort();
        let triple = match shaped.as_slice() {
            [(Shape::A, _)] => vec![x, x, x],
            [(Shape::B, t)] => vec![x, x, t[2]],
            [(Shape::C, t)] => vec![x, t[1], x],
            [(Shape::D, t)] => vec![x, t[1], t[1]],
            [(Shape::B, b), (Shape::C, c)] => vec![x, c[1], b[2]],
            [(Shape::B, b), (Shape::D, d)] => vec![x, d[1], b[2]],
            [(Shape::A, _), (Shape::D, d)] => vec![x, d[1], x],
            _ => return Err(bad(x)),
        };
        out.insert(triple)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{apply_mapping, invert, map_t1_to_t6};

    fn tri(ts: &[(u32, u32, u32)]) -> Instance {
        Instance::triples(ts)
    }

    #[test]
    fn worked_examples() {
        let f = map_t1_to_t6();
        // a1=0, a2=1, b=2, c=3
        let out = apply_mapping(&f, &tri(&[(0, 2, 3), (1, 2, 3)])).unwrap();
        assert_eq!(out, tri(&[(0, 2, 0), (0, 0, 3), (1, 2, 1), (1, 1, 3)]));
        // a=0, b=1, c=2, d=3
        let out = apply_mapping(&f, &tri(&[(0, 1, 2), (1, 3, 0)])).unwrap();
        assert_eq!(out, tri(&[(0, 1, 1), (0, 0, 2), (1, 3, 1), (1, 1, 0)]));
        assert_eq!(apply_mapping(&f, &tri(&[(0, 0, 0)])).unwrap(), tri(&[(0, 0, 0)]));
        assert_eq!(apply_mapping(&f, &tri(&[(0, 0, 2)])).unwrap(), tri(&[(0, 0, 2)]));
    }

    #[test]
    fn case_selection() {
        let (x, y, z) = (Value(0), Value(1), Value(2));
        assert_eq!(f0_case(x, x, x, None), F0Case::IA);
        assert_eq!(f0_case(x, x, z, Some(x)), F0Case::I);
        assert_eq!(f0_case(x, y, x, None), F0Case::II);
        assert_eq!(f0_case(x, y, x, Some(x)), F0Case::IVA);
        assert_eq!(f0_case(x, y, y, Some(z)), F0Case::IIIA);
        assert_eq!(f0_case(x, y, y, Some(x)), F0Case::V);
        assert_eq!(f0_case(x, y, z, None), F0Case::III);
        assert_eq!(f0_case(x, y, z, Some(x)), F0Case::IV);
    }

    #[test]
    fn every_case_round_trips() {
        let f = map_t1_to_t6();
        // One source per case, with y keyed to x where the case needs it.
        let sources = [
            tri(&[(0, 0, 2)]),
            tri(&[(0, 0, 0)]),
            tri(&[(0, 1, 0)]),
            tri(&[(0, 1, 2)]),
            tri(&[(0, 1, 1)]),
            tri(&[(0, 1, 2), (1, 2, 0)]),
            tri(&[(0, 1, 0), (1, 2, 0)]),
            tri(&[(0, 1, 1), (1, 1, 0)]),
        ];
        for s in sources {
            let j = apply_mapping(&f, &s).unwrap();
            assert_eq!(invert(&f, &j).unwrap(), s);
        }
    }

    #[test]
    fn non_images_are_rejected() {
        let f = map_t1_to_t6();
        for bad in [
            tri(&[(0, 1, 2)]),
            tri(&[(0, 1, 0), (0, 2, 0)]),
            tri(&[(0, 0, 1), (0, 0, 2)]),
            tri(&[(0, 0, 0), (0, 0, 1)]),
            tri(&[(0, 1, 1)]),
        ] {
            assert!(matches!(invert(&f, &bad), Err(Error::Recovery(_))), "{bad}");
        }
    }
}
