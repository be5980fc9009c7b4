use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PedalSphere,
    PedalRadial,
    PedalMc,
    Classical,
    Santalo,
    ClosedForm,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::PedalSphere => "pedal-sphere",
            Method::PedalRadial => "pedal-radial",
            Method::PedalMc => "pedal-mc",
            Method::Classical => "classical",
            Method::Santalo => "santalo",
            Method::ClosedForm => "closed-form",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodValue {
    pub method: Method,
    pub value: f64,
    pub stderr: Option<f64>,
    /// Free-form `key=value` list of the settings that produced the value.
    pub settings: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub a: Method,
    pub b: Method,
    pub absolute: f64,
    pub relative: f64,
}

/// Values of `M` for one body by several methods.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub body: String,
    pub center: [f64; 3],
    pub values: Vec<MethodValue>,
    pub discrepancies: Vec<Discrepancy>,
}

impl CurvatureReport {
    pub fn new(body: impl Into<String>, center: [f64; 3]) -> Self {
        Self {
            body: body.into(),
            center,
            ..Self::default()
        }
    }

    pub fn push(&mut self, method: Method, value: f64, stderr: Option<f64>, settings: impl Into<String>) {
        self.values.push(MethodValue {
            method,
            value,
            stderr,
            settings: settings.into(),
        });
    }

    pub fn value(&self, method: Method) -> Option<f64> {
        self.values.iter().find(|v| v.method == method).map(|v| v.value)
    }

    /// Fills in every pairwise discrepancy, relative to the second value.
    pub fn finish(&mut self) -> Result<()> {
        if let Some(bad) = self.values.iter().find(|v| !(v.value.is_finite() && v.value > 0.0)) {
            return Err(Error::InvalidValue {
                method: bad.method.name().into(),
                value: bad.value,
            });
        }
        self.discrepancies.clear();
        for (i, a) in self.values.iter().enumerate() {
            for b in &self.values[i + 1..] {
                let absolute = (a.value - b.value).abs();
                self.discrepancies.push(Discrepancy {
                    a: a.method,
                    b: b.method,
                    absolute,
                    relative: absolute / b.value.abs(),
                });
            }
        }
        Ok(())
    }

    /// `method,value,stderr,settings`; numbers in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,value,stderr,settings\n");
        for v in &self.values {
            let stderr = v.stderr.map(|s| s.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},\"{}\"", v.method.name(), v.value, stderr, v.settings);
        }
        out
    }
}
