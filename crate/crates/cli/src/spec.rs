//! System specification files (TOML, or JSON by extension).

use std::fmt;
use std::path::Path;

use hyperchain::{Builtin, Carrier, MapSystem, Metric, PointData, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{location}: {message}")]
pub struct SpecError {
    /// `path:line:column` for parse errors, `path: field` for validation errors.
    pub location: String,
    pub message: String,
}

impl SpecError {
    fn at(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            location: field.into(),
            message: message.into(),
        }
    }
}

/// A real number written as an integer, a float, or a string such as
/// `"1/16"`, `"0.0625"` or `"6.25e-2"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Real {
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Int(i) => write!(f, "{i}"),
            Real::Float(x) => write!(f, "{x}"),
            Real::Text(s) => f.write_str(s),
        }
    }
}

impl Real {
    /// Floats go through their shortest decimal form, so `0.1` is exactly
    /// `1/10` for rational scalars.
    pub fn to_scalar<T: Scalar>(&self, field: &str) -> Result<T, SpecError> {
        let text = self.to_string();
        T::parse_decimal(text.trim()).ok_or_else(|| SpecError::at(field, format!("`{text}` is not a number")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierSpec {
    /// `interval_grid`, `circle_grid`, or `explicit`.
    pub kind: String,
    /// Grid size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// For explicit carriers: `euclidean`, `circle`, `discrete`, or `explicit`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    /// One coordinate list per point (or one number per point on the line).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Coord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<Vec<Real>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Vector(Vec<Real>),
    Scalar(Real),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    /// `tent`, `logistic`, `rotation`, `identity`, or `constant`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    /// Logistic parameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Real>,
    /// Rotation angle as a fraction of a turn.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Real>,
    /// Constant value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    /// Largest vertex count of a product or hyperspace graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    /// Iterates checked by `totally_transitive`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// Longest exact-length search for `exact`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_cap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub carrier: CarrierSpec,
    pub map: MapSpec,
    pub epsilons: Vec<Real>,
    pub analyses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperspace_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product_n: Option<usize>,
    #[serde(rename = "exact_U", default, skip_serializing_if = "Option::is_none")]
    pub exact_u: Option<Vec<usize>>,
    #[serde(default)]
    pub budget: BudgetSpec,
    /// `exact` (rational arithmetic, the default) or `f64`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<String>,
}

pub const ANALYSES: [&str; 9] = [
    "transitive",
    "internal",
    "mixing",
    "weak_mixing",
    "totally_transitive",
    "exact",
    "recurrent",
    "hyper_transitive",
    "product_transitive",
];

/// Loads and validates a spec. JSON when the extension is `.json`, TOML otherwise.
pub fn load_spec(path: &Path) -> Result<SystemSpec, SpecError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| SpecError::at(&shown, format!("cannot read: {e}")))?;
    let spec = if path.extension().is_some_and(|e| e == "json") {
        parse_json(&text, &shown)?
    } else {
        parse_toml(&text, &shown)?
    };
    spec.validate()
        .map_err(|e| SpecError::at(format!("{shown}: {}", e.location), e.message))?;
    Ok(spec)
}

pub fn parse_toml(text: &str, shown: &str) -> Result<SystemSpec, SpecError> {
    toml::from_str(text).map_err(|e| {
        let location = match e.span() {
            Some(span) => {
                let (line, col) = line_col(text, span.start);
                format!("{shown}:{line}:{col}")
            }
            None => shown.to_string(),
        };
        SpecError::at(location, e.message().to_string())
    })
}

pub fn parse_json(text: &str, shown: &str) -> Result<SystemSpec, SpecError> {
    serde_json::from_str(text).map_err(|e| SpecError::at(format!("{shown}:{}:{}", e.line(), e.column()), e.to_string()))
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

impl SystemSpec {
    pub fn uses_f64(&self) -> bool {
        self.scalar.as_deref() == Some("f64")
    }

    /// Structural checks that do not depend on the scalar type.
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.epsilons.is_empty() {
            return Err(SpecError::at("epsilons", "at least one epsilon is required"));
        }
        if self.analyses.is_empty() {
            return Err(SpecError::at("analyses", "at least one analysis is required"));
        }
        for (i, a) in self.analyses.iter().enumerate() {
            if !ANALYSES.contains(&a.as_str()) {
                return Err(SpecError::at(
                    format!("analyses[{i}]"),
                    format!("unknown analysis `{a}`; expected one of {}", ANALYSES.join(", ")),
                ));
            }
        }
        match self.scalar.as_deref() {
            None | Some("exact") | Some("f64") => {}
            Some(other) => return Err(SpecError::at("scalar", format!("unknown scalar `{other}`"))),
        }
        for (field, v) in [("hyperspace_n", self.hyperspace_n), ("product_n", self.product_n)] {
            if v == Some(0) {
                return Err(SpecError::at(field, "must be >= 1"));
            }
        }
        if self.budget.n_max == Some(0) {
            return Err(SpecError::at("budget.n_max", "must be >= 1"));
        }
        if self.uses_f64() {
            self.build::<f64>().map(|_| ())
        } else {
            self.build::<hyperchain::Exact>().map(|_| ())
        }
    }

    pub fn build_carrier<T: Scalar>(&self) -> Result<Carrier<T>, SpecError> {
        let c = &self.carrier;
        let grid_points = || {
            c.points
                .filter(|&n| n >= 1)
                .ok_or_else(|| SpecError::at("carrier.points", "grid carriers need points >= 1"))
        };
        let wrap = |field: &'static str| move |e: hyperchain::Error| SpecError::at(field, e.to_string());
        match c.kind.as_str() {
            "interval_grid" => Carrier::interval_grid(grid_points()?).map_err(wrap("carrier")),
            "circle_grid" => Carrier::circle_grid(grid_points()?).map_err(wrap("carrier")),
            "explicit" => self.explicit_carrier(),
            other => Err(SpecError::at(
                "carrier.kind",
                format!("unknown carrier kind `{other}`; expected interval_grid, circle_grid, or explicit"),
            )),
        }
    }

    fn explicit_carrier<T: Scalar>(&self) -> Result<Carrier<T>, SpecError> {
        let c = &self.carrier;
        let metric = c.metric.as_deref().unwrap_or("euclidean");
        let wrap = |e: hyperchain::Error| SpecError::at("carrier", e.to_string());
        let coords = || -> Result<Vec<PointData<T>>, SpecError> {
            let list = c
                .coords
                .as_ref()
                .ok_or_else(|| SpecError::at("carrier.coords", format!("the {metric} metric needs coordinates")))?;
            list.iter()
                .enumerate()
                .map(|(i, p)| {
                    let field = format!("carrier.coords[{i}]");
                    let v = match p {
                        Coord::Scalar(x) => vec![x.to_scalar(&field)?],
                        Coord::Vector(xs) => xs.iter().map(|x| x.to_scalar(&field)).collect::<Result<_, _>>()?,
                    };
                    Ok(PointData::Coords(v))
                })
                .collect()
        };
        match metric {
            "euclidean" => Carrier::new(coords()?, Metric::Euclidean).map_err(wrap),
            "circle" => Carrier::new(coords()?, Metric::Circle).map_err(wrap),
            "discrete" | "explicit" => {
                let n = c
                    .labels
                    .as_ref()
                    .map(Vec::len)
                    .or_else(|| c.distances.as_ref().map(Vec::len))
                    .or(c.points)
                    .ok_or_else(|| SpecError::at("carrier.labels", "give labels, distances, or points"))?;
                let labels = c
                    .labels
                    .clone()
                    .unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
                let points = labels.into_iter().map(PointData::Label).collect();
                let m = if metric == "discrete" {
                    Metric::Discrete
                } else {
                    let rows = c
                        .distances
                        .as_ref()
                        .ok_or_else(|| SpecError::at("carrier.distances", "the explicit metric needs distances"))?;
                    let d = rows
                        .iter()
                        .enumerate()
                        .map(|(i, row)| {
                            row.iter()
                                .enumerate()
                                .map(|(j, x)| x.to_scalar(&format!("carrier.distances[{i}][{j}]")))
                                .collect::<Result<Vec<T>, _>>()
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Metric::Explicit(d)
                };
                Carrier::new(points, m).map_err(wrap)
            }
            other => Err(SpecError::at("carrier.metric", format!("unknown metric `{other}`"))),
        }
    }

    pub fn build_system<T: Scalar>(&self) -> Result<MapSystem<T>, SpecError> {
        let carrier = self.build_carrier::<T>()?;
        let m = &self.map;
        match (&m.builtin, &m.table) {
            (Some(_), Some(_)) => Err(SpecError::at("map", "give either builtin or table, not both")),
            (None, None) => Err(SpecError::at("map", "give a builtin name or a table")),
            (None, Some(table)) => {
                if table.len() != carrier.len() {
                    return Err(SpecError::at(
                        "map.table",
                        format!("table has {} entries for {} points", table.len(), carrier.len()),
                    ));
                }
                let mut out = Vec::with_capacity(table.len());
                for (i, &v) in table.iter().enumerate() {
                    if v < 0 || v as usize >= carrier.len() {
                        return Err(SpecError::at(
                            format!("map.table[{i}]"),
                            format!("index {v} out of range 0..{}", carrier.len()),
                        ));
                    }
                    out.push(v as usize);
                }
                MapSystem::table(carrier, out).map_err(|e| SpecError::at("map.table", e.to_string()))
            }
            (Some(name), None) => {
                let param = |field: &str, v: &Option<Real>| -> Result<T, SpecError> {
                    v.as_ref()
                        .ok_or_else(|| {
                            SpecError::at(format!("map.{field}"), format!("builtin `{name}` needs `{field}`"))
                        })?
                        .to_scalar(&format!("map.{field}"))
                };
                let map = match name.as_str() {
                    "tent" => Builtin::Tent,
                    "logistic" => Builtin::Logistic(param("r", &m.r)?),
                    "rotation" => Builtin::Rotation(param("s", &m.s)?),
                    "identity" => Builtin::Identity,
                    "constant" => Builtin::Constant(param("c", &m.c)?),
                    other => return Err(SpecError::at("map.builtin", format!("unknown builtin `{other}`"))),
                };
                MapSystem::builtin(carrier, map).map_err(|e| SpecError::at("map.builtin", e.to_string()))
            }
        }
    }

    pub fn build_epsilons<T: Scalar>(&self) -> Result<Vec<T>, SpecError> {
        self.epsilons
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let field = format!("epsilons[{i}]");
                let v: T = e.to_scalar(&field)?;
                if v < T::zero() {
                    return Err(SpecError::at(field, "epsilon must be non-negative"));
                }
                Ok(v)
            })
            .collect()
    }

    pub fn build<T: Scalar>(&self) -> Result<(MapSystem<T>, Vec<T>), SpecError> {
        let system = self.build_system::<T>()?;
        let eps = self.build_epsilons::<T>()?;
        if let Some(u) = &self.exact_u {
            if u.is_empty() {
                return Err(SpecError::at("exact_U", "U must be non-empty"));
            }
            if let Some((i, &x)) = u.iter().enumerate().find(|(_, &x)| x >= system.len()) {
                return Err(SpecError::at(
                    format!("exact_U[{i}]"),
                    format!("vertex {x} out of range 0..{}", system.len()),
                ));
            }
        }
        for (field, v) in [("hyperspace_n", self.hyperspace_n)] {
            if let Some(n) = v {
                if n > system.len() {
                    return Err(SpecError::at(
                        field,
                        format!("{n} exceeds the {} carrier points", system.len()),
                    ));
                }
            }
        }
        Ok((system, eps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
epsilons = [0.1]
analyses = ["transitive"]

[carrier]
kind = "interval_grid"
points = 16

[map]
builtin = "tent"
"#;

    #[test]
    fn minimal_spec_is_valid() {
        let spec = parse_toml(MINIMAL, "m.toml").unwrap();
        spec.validate().unwrap();
        let eps = spec.build_epsilons::<hyperchain::Exact>().unwrap();
        assert_eq!(eps[0], hyperchain::Exact::from_ratio(1, 10));
    }

    #[test]
    fn table_index_out_of_range() {
        let text = r#"
epsilons = ["1/8"]
analyses = ["transitive"]
[carrier]
kind = "interval_grid"
points = 3
[map]
table = [0, 3, 1]
"#;
        let err = parse_toml(text, "t.toml").unwrap().validate().unwrap_err();
        assert_eq!(err.location, "map.table[1]");
        assert!(err.message.contains("out of range"));
    }

    #[test]
    fn circle_with_tent_is_rejected() {
        let text = MINIMAL.replace("interval_grid", "circle_grid");
        let err = parse_toml(&text, "c.toml").unwrap().validate().unwrap_err();
        assert_eq!(err.location, "map.builtin");
        assert!(err.message.contains("incompatible"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = MINIMAL.replace("points = 16", "points = sixteen");
        let err = parse_toml(&text, "p.toml").unwrap_err();
        assert!(err.location.starts_with("p.toml:7:"), "{}", err.location);
    }

    #[test]
    fn unknown_names_are_rejected() {
        let text = MINIMAL.replace("\"transitive\"", "\"chaotic\"");
        let err = parse_toml(&text, "u.toml").unwrap().validate().unwrap_err();
        assert_eq!(err.location, "analyses[0]");
        let text = MINIMAL.replace("tent", "baker");
        let err = parse_toml(&text, "u.toml").unwrap().validate().unwrap_err();
        assert_eq!(err.location, "map.builtin");
        let text = MINIMAL.replace("epsilons = [0.1]", "epsilons = []");
        assert_eq!(
            parse_toml(&text, "u.toml").unwrap().validate().unwrap_err().location,
            "epsilons"
        );
        let text = format!("{MINIMAL}\ncolour = 3\n");
        assert!(parse_toml(&text, "u.toml").is_err());
    }

    #[test]
    fn explicit_carriers() {
        let text = r#"
epsilons = [1]
analyses = ["transitive"]
[carrier]
kind = "explicit"
metric = "explicit"
labels = ["a", "b"]
distances = [[0, 2], [2, 0]]
[map]
table = [1, 0]
"#;
        let spec = parse_toml(text, "e.toml").unwrap();
        spec.validate().unwrap();
        let text = text.replace("[[0, 2], [2, 0]]", "[[0, 2], [3, 0]]");
        let err = parse_toml(&text, "e.toml").unwrap().validate().unwrap_err();
        assert_eq!(err.location, "carrier");
    }

    #[test]
    fn json_specs() {
        let text = r#"{"carrier": {"kind": "circle_grid", "points": 4},
            "map": {"builtin": "rotation", "s": "1/4"},
            "epsilons": ["0.01"], "analyses": ["mixing"], "exact_U": [0]}"#;
        let spec = parse_json(text, "r.json").unwrap();
        spec.validate().unwrap();
        assert_eq!(spec.exact_u, Some(vec![0]));
    }
}
