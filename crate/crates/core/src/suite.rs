//! The bundled example structures shared by tests, the CLI and the acceptance suite.

use serde::Serialize;

use crate::algebra::{build_frame, InvolutiveFrame};
use crate::error::{Error, Result};
use crate::linalg::{c, C64, ONE, ZERO};
use crate::numbers::liouville;
use crate::spectral::Backend;

#[derive(Clone, Debug, Serialize)]
pub struct Structure {
    pub name: &'static str,
    pub description: &'static str,
    pub backend: Backend,
    #[serde(skip)]
    pub generators: Vec<Vec<C64>>,
}

impl Structure {
    pub fn frame(&self) -> Result<InvolutiveFrame> {
        build_frame(&self.backend.algebra(), &self.generators)
    }

    /// True when 𝔳 is all of the complexified algebra.
    pub fn is_de_rham(&self) -> bool {
        self.generators.len() == self.backend.algebra_dim()
    }
}

fn units(n: usize) -> Vec<Vec<C64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ONE } else { ZERO }).collect())
        .collect()
}

fn real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| c(x, 0.0)).collect()
}

pub const NAMES: [&str; 8] = [
    "t1-d",
    "t2-de-rham",
    "t2-d1",
    "t2-d1+i*d2",
    "t2-d1+sqrt2*d2",
    "t2-d1+liouville*d2",
    "su2-de-rham",
    "su2-cr",
];

pub fn structure(name: &str) -> Result<Structure> {
    let torus = |dims| Backend::Torus { dims };
    let s = match name {
        "t1-d" => Structure {
            name: "t1-d",
            description: "T1, span{d}",
            backend: torus(1),
            generators: units(1),
        },
        "t2-de-rham" => Structure {
            name: "t2-de-rham",
            description: "T2, full complexified algebra",
            backend: torus(2),
            generators: units(2),
        },
        "t2-d1" => Structure {
            name: "t2-d1",
            description: "T2, span{d1}",
            backend: torus(2),
            generators: vec![real(&[1.0, 0.0])],
        },
        "t2-d1+i*d2" => Structure {
            name: "t2-d1+i*d2",
            description: "T2, span{d1 + i d2}",
            backend: torus(2),
            generators: vec![vec![ONE, c(0.0, 1.0)]],
        },
        "t2-d1+sqrt2*d2" => Structure {
            name: "t2-d1+sqrt2*d2",
            description: "T2, span{d1 + sqrt(2) d2}",
            backend: torus(2),
            generators: vec![real(&[1.0, std::f64::consts::SQRT_2])],
        },
        "t2-d1+liouville*d2" => Structure {
            name: "t2-d1+liouville*d2",
            description: "T2, span{d1 + a d2}, a = sum 10^-j!",
            backend: torus(2),
            generators: vec![real(&[1.0, liouville()])],
        },
        "su2-de-rham" => Structure {
            name: "su2-de-rham",
            description: "SU(2), full complexified algebra",
            backend: Backend::Su2,
            generators: units(3),
        },
        "su2-cr" => Structure {
            name: "su2-cr",
            description: "SU(2), span{e2 + i e3}",
            backend: Backend::Su2,
            generators: vec![vec![ZERO, ONE, c(0.0, 1.0)]],
        },
        other => return Err(Error::InvalidInput(format!("unknown structure `{other}`"))),
    };
    Ok(s)
}

pub fn bundled() -> Vec<Structure> {
    NAMES.iter().map(|n| structure(n).expect("bundled names resolve")).collect()
}
