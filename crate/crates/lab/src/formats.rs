//! JSON input and output formats.
//!
//! A lattice is given by generators in `G × Ĝ`, each a pair `[x, ω]` of
//! component vectors:
//!
//! ```json
//! {"orders": [4], "generators": [[[2], [0]], [[0], [2]]]}
//! ```
//!
//! A window lists `|G|` complex values as `[re, im]` pairs, in the
//! lexicographic order of `G`:
//!
//! ```json
//! {"orders": [4], "values": [[1, 0], [0, 0], [0, 0], [0, 0]]}
//! ```
//!
//! `orders` may be left out of either when the command gets `--orders`.

use std::fs;
use std::path::Path;

use bessel_core::gabor::Window;
use bessel_core::groups::{
    adjoint_lattice, covolume, lattice_from_generators, FiniteAbelianGroup, Lattice, PhasePoint, PhaseSpace,
};
use bessel_core::linalg::c;
use serde::{Deserialize, Serialize};

use crate::error::LabError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeInput {
    #[serde(default)]
    pub orders: Option<Vec<u64>>,
    pub generators: Vec<(Vec<u64>, Vec<u64>)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowInput {
    #[serde(default)]
    pub orders: Option<Vec<u64>>,
    pub values: Vec<(f64, f64)>,
}

/// A lattice as written in reports: generators, every element, and the
/// covolume as an exact fraction.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeOutput {
    pub orders: Vec<u64>,
    pub generators: Vec<(Vec<u64>, Vec<u64>)>,
    pub size: usize,
    pub covolume: String,
    pub elements: Vec<(Vec<u64>, Vec<u64>)>,
}

impl LatticeOutput {
    pub fn new(lattice: &Lattice) -> Self {
        let cv = covolume(lattice);
        LatticeOutput {
            orders: lattice.group().orders().to_vec(),
            generators: lattice.generators().iter().map(point_pair).collect(),
            size: lattice.size(),
            covolume: format!("{}/{}", cv.numer(), cv.denom()),
            elements: lattice.elements().iter().map(point_pair).collect(),
        }
    }
}

fn point_pair(z: &PhasePoint) -> (Vec<u64>, Vec<u64>) {
    (z.x.clone(), z.omega.clone())
}

/// Reads `arg` as inline JSON when it starts with `{`, and as a file path
/// otherwise.
pub fn read_json_arg(arg: &str) -> Result<(String, String), LabError> {
    if arg.trim_start().starts_with('{') {
        return Ok(("inline argument".into(), arg.to_string()));
    }
    read_file(Path::new(arg)).map(|text| (arg.to_string(), text))
}

pub fn read_file(path: &Path) -> Result<String, LabError> {
    fs::read_to_string(path).map_err(|e| LabError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn parse<'a, T: Deserialize<'a>>(source: &str, text: &'a str) -> Result<T, LabError> {
    serde_json::from_str(text).map_err(|e| LabError::Parse {
        source: source.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// The group from `--orders` and/or the file; both must agree when given.
fn resolve_orders(flag: Option<&[u64]>, file: Option<&[u64]>) -> Result<FiniteAbelianGroup, LabError> {
    let orders = match (flag, file) {
        (Some(a), Some(b)) if a != b => {
            return Err(LabError::Validation(format!("--orders {a:?} disagrees with orders {b:?} in the input")))
        }
        (Some(a), _) | (None, Some(a)) => a.to_vec(),
        (None, None) => {
            return Err(LabError::Usage("group orders missing: pass --orders or put them in the input".into()))
        }
    };
    FiniteAbelianGroup::new(orders).map_err(|e| LabError::Validation(e.to_string()))
}

pub fn parse_lattice(source: &str, text: &str, orders: Option<&[u64]>) -> Result<Lattice, LabError> {
    let input: LatticeInput = parse(source, text)?;
    let group = resolve_orders(orders, input.orders.as_deref())?;
    let space = PhaseSpace::new(group);
    let gens: Vec<PhasePoint> = input.generators.into_iter().map(|(x, w)| PhasePoint::new(x, w)).collect();
    lattice_from_generators(&space, &gens).map_err(|e| LabError::Validation(format!("{source}: {e}")))
}

pub fn parse_window(source: &str, text: &str, orders: Option<&[u64]>) -> Result<Window, LabError> {
    let input: WindowInput = parse(source, text)?;
    let group = resolve_orders(orders, input.orders.as_deref())?;
    let values = input.values.iter().map(|&(re, im)| c(re, im)).collect();
    Window::new(group, values).map_err(|e| LabError::Validation(format!("{source}: {e}")))
}

/// The adjoint of a parsed lattice, for the `adjoint` command.
pub fn adjoint_output(lattice: &Lattice) -> LatticeOutput {
    LatticeOutput::new(&adjoint_lattice(lattice))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_lattice_with_orders_flag() {
        let l = parse_lattice("t", r#"{"generators":[[[2],[0]],[[0],[2]]]}"#, Some(&[4])).unwrap();
        assert_eq!(l.size(), 4);
        let out = LatticeOutput::new(&l);
        assert_eq!(out.covolume, "1/1");
        assert_eq!(out.generators, vec![(vec![2], vec![0]), (vec![0], vec![2])]);
    }

    #[test]
    fn parse_errors_keep_their_position() {
        let err = parse_lattice("t", "{\n  \"generators\": [[[2], [0]],\n  oops]\n}", Some(&[4])).unwrap_err();
        match err {
            LabError::Parse { line, column, .. } => assert_eq!((line, column), (3, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conflicting_orders_are_rejected() {
        let err = parse_lattice("t", r#"{"orders":[3],"generators":[]}"#, Some(&[4])).unwrap_err();
        assert!(matches!(err, LabError::Validation(_)));
        let err = parse_lattice("t", r#"{"generators":[]}"#, None).unwrap_err();
        assert!(matches!(err, LabError::Usage(_)));
    }

    #[test]
    fn window_length_must_match_the_group() {
        let err = parse_window("w", r#"{"values":[[1,0],[0,0]]}"#, Some(&[4])).unwrap_err();
        assert!(matches!(err, LabError::Validation(_)));
        let w = parse_window("w", r#"{"orders":[2],"values":[[1,0],[0,-1]]}"#, None).unwrap();
        assert_eq!(w.values()[1], c(0.0, -1.0));
    }

    #[test]
    fn out_of_range_generators_are_rejected() {
        let err = parse_lattice("t", r#"{"generators":[[[5],[0]]]}"#, Some(&[4])).unwrap_err();
        assert!(matches!(err, LabError::Validation(_)));
    }
}
