//! Job files: the equation, its parameters and the order bounds.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum EquationSpec {
    /// `Y'' = q Y`.
    Unimodular { q: String },
    /// `Y'' + r1 Y' + r0 Y = 0`.
    General { r1: String, r0: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default)]
    pub parameters: Vec<String>,
    pub equation: EquationSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub riccati_solution: Option<String>,
    #[serde(default = "default_order")]
    pub max_order_reductive: u32,
    #[serde(default = "default_order")]
    pub max_order_unipotent: u32,
}

fn default_order() -> u32 {
    2
}

impl JobSpec {
    pub fn from_json(src: &str) -> Result<JobSpec, String> {
        serde_json::from_str(src).map_err(|e| format!("invalid job file: {e}"))
    }

    /// Checks parameter names and order bounds.
    pub fn validate(&self) -> Result<(), String> {
        for (i, p) in self.parameters.iter().enumerate() {
            let mut chars = p.chars();
            let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(format!("parameter name `{p}` is not an identifier"));
            }
            if p == "x" {
                return Err("parameter name `x` is reserved for the independent variable".into());
            }
            if self.parameters[..i].contains(p) {
                return Err(format!("parameter `{p}` declared twice"));
            }
        }
        if self.max_order_reductive == 0 || self.max_order_unipotent == 0 {
            return Err("order bounds must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let j = JobSpec::from_json(r#"{"parameters":["t1"],"equation":{"q":"x"}}"#).unwrap();
        assert_eq!(j.max_order_reductive, 2);
        assert_eq!(j.equation, EquationSpec::Unimodular { q: "x".into() });
        let j = JobSpec::from_json(r#"{"equation":{"r1":"1/x","r0":"0"},"max_order_unipotent":3}"#).unwrap();
        assert_eq!(j.max_order_unipotent, 3);
        assert!(JobSpec::from_json(r#"{"equation":{"q":"x"},"bogus":1}"#).is_err());
    }

    #[test]
    fn validation() {
        let mut j = JobSpec::from_json(r#"{"parameters":["t1","t1"],"equation":{"q":"x"}}"#).unwrap();
        assert!(j.validate().is_err());
        j.parameters = vec!["x".into()];
        assert!(j.validate().is_err());
        j.parameters = vec!["a b".into()];
        assert!(j.validate().is_err());
        j.parameters = vec!["s".into()];
        assert!(j.validate().is_ok());
        j.max_order_unipotent = 0;
        assert!(j.validate().is_err());
    }
}
