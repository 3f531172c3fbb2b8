//! Named germs and collections used by the test suites and as worked
//! examples. Each fixture records the values the symbolic side produces.

use crate::germs::{FormCollection, Partition, VarietyGerm};
use crate::polyring::{parse_one_form, parse_polynomial};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub variables: Vec<String>,
    pub equations: Vec<&'static str>,
    pub partition: Vec<usize>,
    pub blocks: Vec<Vec<&'static str>>,
    pub germ: VarietyGerm,
    pub collection: FormCollection,
}

impl Fixture {
    fn new(
        name: &'static str,
        vars: &[&str],
        equations: &[&'static str],
        partition: &[usize],
        blocks: &[&[&'static str]],
    ) -> Fixture {
        let variables: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let germ = VarietyGerm::new(
            variables.len(),
            equations
                .iter()
                .map(|e| parse_polynomial(e, &variables).expect("fixture equation"))
                .collect(),
        )
        .expect("fixture germ");
        let collection = FormCollection::new(
            Partition::new(partition.to_vec()).expect("fixture partition"),
            blocks
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|w| parse_one_form(w, &variables).expect("fixture form"))
                        .collect()
                })
                .collect(),
        )
        .expect("fixture collection");
        Fixture {
            name,
            variables,
            equations: equations.to_vec(),
            partition: partition.to_vec(),
            blocks: blocks.iter().map(|b| b.to_vec()).collect(),
            germ,
            collection,
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.equations.is_empty()
    }
}

const XY: &[&str] = &["x", "y"];
const XYZ: &[&str] = &["x", "y", "z"];
const XYZW: &[&str] = &["x", "y", "z", "w"];
const CONE: &str = "x^2+y^2+z^2";
const A2: &str = "x^2+y^2+z^3";

/// `d(x^3 + y^3)` on the plane: index 4.
pub fn smooth_cubic() -> Fixture {
    Fixture::new("smooth-cubic", XY, &[], &[2], &[&["3*x^2*dx + 3*y^2*dy"]])
}

pub fn smooth_radial() -> Fixture {
    Fixture::new("smooth-radial", XY, &[], &[2], &[&["x*dx + y*dy"]])
}

pub fn smooth_two_blocks() -> Fixture {
    Fixture::new("smooth-two-blocks", XY, &[], &[1, 1], &[&["dx", "x*dy"], &["dy", "y*dx"]])
}

/// `dx` on the A1 surface cone: singular but not special at the origin.
pub fn cone_dx() -> Fixture {
    Fixture::new("cone-dx", XYZ, &[CONE], &[2], &[&["dx"]])
}

pub fn cone_dxy() -> Fixture {
    Fixture::new("cone-dxy", XYZ, &[CONE], &[2], &[&["y*dx + x*dy"]])
}

pub fn cone_weighted() -> Fixture {
    Fixture::new("cone-weighted", XYZ, &[CONE], &[2], &[&["x*dx + 2*y*dy + 3*z*dz"]])
}

pub fn cone_tilted() -> Fixture {
    Fixture::new("cone-tilted", XYZ, &[CONE], &[2], &[&["z*dx + x*dz + dy"]])
}

pub fn cone_two_blocks() -> Fixture {
    Fixture::new("cone-two-blocks", XYZ, &[CONE], &[1, 1], &[&["dx", "y*dz"], &["dy", "z*dx"]])
}

pub fn cone_constant_blocks() -> Fixture {
    Fixture::new("cone-constant-blocks", XYZ, &[CONE], &[1, 1], &[&["dx", "dy"], &["dy", "dz"]])
}

pub fn a2_dx() -> Fixture {
    Fixture::new("a2-dx", XYZ, &[A2], &[2], &[&["dx"]])
}

pub fn a2_dxy() -> Fixture {
    Fixture::new("a2-dxy", XYZ, &[A2], &[2], &[&["y*dx + x*dy"]])
}

/// The three-dimensional A1 singularity in `C^4`.
pub fn threefold_dx() -> Fixture {
    Fixture::new("threefold-dx", XYZW, &["x^2+y^2+z^2+w^2"], &[3], &[&["dx"]])
}

pub fn cusp_dx() -> Fixture {
    Fixture::new("cusp-dx", XY, &["x^2-y^3"], &[1], &[&["dx"]])
}

pub fn space_curve_dz() -> Fixture {
    Fixture::new("space-curve-dz", XYZ, &[CONE, "x*y + z^2 + x^3"], &[1], &[&["dz"]])
}

/// Whitney umbrella: the singular locus is a line, so the special scheme
/// of `dx` is not isolated.
pub fn umbrella_dx() -> Fixture {
    Fixture::new("umbrella-dx", XYZ, &["x^2 - y^2*z"], &[2], &[&["dx"]])
}

/// Every fixture with an isolated special scheme.
pub fn isolated() -> Vec<Fixture> {
    vec![
        smooth_cubic(),
        smooth_radial(),
        smooth_two_blocks(),
        cone_dx(),
        cone_dxy(),
        cone_weighted(),
        cone_tilted(),
        cone_two_blocks(),
        cone_constant_blocks(),
        a2_dx(),
        a2_dxy(),
        threefold_dx(),
        cusp_dx(),
        space_curve_dz(),
    ]
}
