use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::SpectrumTruncation;

#[derive(Clone, Copy)]
pub enum WeightKind {
    /// `ω(λ) = log(1 + λ)`.
    Smooth,
    /// `ω(λ) = (1 + λ)^{1/(2s)}`.
    Gevrey(f64),
    Custom {
        label: &'static str,
        eval: fn(f64) -> f64,
    },
}

impl fmt::Debug for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightKind::Smooth => write!(f, "smooth"),
            WeightKind::Gevrey(s) => write!(f, "gevrey:{s}"),
            WeightKind::Custom { label, .. } => write!(f, "custom:{label}"),
        }
    }
}

impl PartialEq for WeightKind {
    fn eq(&self, other: &Self) -> bool {
        format!("{self:?}") == format!("{other:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Beurling,
    Roumieu,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightFunction {
    pub kind: WeightKind,
    pub flavor: Flavor,
}

impl WeightFunction {
    pub fn smooth() -> Self {
        Self {
            kind: WeightKind::Smooth,
            flavor: Flavor::Beurling,
        }
    }

    pub fn gevrey(s: f64, flavor: Flavor) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "Gevrey order must be positive, got {s}"
            )));
        }
        Ok(Self {
            kind: WeightKind::Gevrey(s),
            flavor,
        })
    }

    pub fn with_flavor(self, flavor: Flavor) -> Self {
        Self { flavor, ..self }
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        match self.kind {
            WeightKind::Smooth => lambda.ln_1p(),
            WeightKind::Gevrey(s) => (1.0 + lambda).powf(1.0 / (2.0 * s)),
            WeightKind::Custom { eval, .. } => eval(lambda),
        }
    }

    pub fn label(&self) -> String {
        format!("{:?}", self.kind)
    }

    /// Checks that ω is strictly increasing along the levels of a truncation.
    pub fn check_increasing(&self, truncation: &SpectrumTruncation) -> Result<()> {
        let values: Vec<f64> = truncation
            .levels
            .iter()
            .map(|l| self.eval(l.lambda_f64))
            .collect();
        if values.windows(2).all(|w| w[1] > w[0]) && values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "weight {} is not strictly increasing on the truncation",
                self.label()
            )))
        }
    }
}

impl Serialize for WeightFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WeightFunction", 2)?;
        st.serialize_field("kind", &self.label())?;
        st.serialize_field("flavor", &self.flavor)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{enumerate_levels, Backend};

    #[test]
    fn weights_are_increasing() {
        let t = enumerate_levels(Backend::Su2, 40.0).unwrap();
        WeightFunction::smooth().check_increasing(&t).unwrap();
        WeightFunction::gevrey(2.0, Flavor::Roumieu)
            .unwrap()
            .check_increasing(&t)
            .unwrap();
        let flat = WeightFunction {
            kind: WeightKind::Custom {
                label: "flat",
                eval: |_| 1.0,
            },
            flavor: Flavor::Beurling,
        };
        assert!(flat.check_increasing(&t).is_err());
    }

    #[test]
    fn gevrey_one_is_square_root() {
        let w = WeightFunction::gevrey(1.0, Flavor::Roumieu).unwrap();
        assert_eq!(w.eval(3.0), 2.0);
        assert!(WeightFunction::gevrey(0.0, Flavor::Roumieu).is_err());
    }
}
