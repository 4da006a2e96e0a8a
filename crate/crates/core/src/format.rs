//! The space-file document format: a UTF-8 JSON object
//! `{"labels": [...], "matrix": [[...]], "metadata": {...}?}` with every
//! rational entry written either as an integer number or as a `"p/q"`
//! string. Decimal number literals are parsed exactly from their written
//! digits; binary floating point is never involved, so
//! `parse(serialize(S)) = S` holds with exact equality.

use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::embedding::{EmbeddedSpace, EmbeddingError, EmbeddingParams};
use crate::metric::{FiniteMetricSpace, MetricError};
use crate::scalar::{Scalar, ScalarParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {source}")]
    Number {
        path: String,
        source: ScalarParseError,
    },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// A parsed space file: the validated space, plus the embedding metadata
/// when the file was written by the gluing pipeline.
#[derive(Debug, Clone)]
pub struct SpaceDocument {
    pub space: FiniteMetricSpace,
    pub embedded: Option<EmbeddedSpace>,
}

fn schema(path: &str, message: impl Into<String>) -> FormatError {
    FormatError::Schema {
        path: path.to_owned(),
        message: message.into(),
    }
}

fn scalar_from_value(value: &Value, path: &str) -> Result<Scalar, FormatError> {
    let literal = match value {
        // With arbitrary-precision numbers the original literal text is
        // preserved, so decimals parse exactly as written.
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => {
            return Err(schema(
                path,
                format!("expected a number or \"p/q\" string, got {other}"),
            ))
        }
    };
    literal
        .parse::<Scalar>()
        .map_err(|source| FormatError::Number {
            path: path.to_owned(),
            source,
        })
}

fn scalar_to_value(value: &Scalar) -> Value {
    if value.is_integer() {
        if let Some(small) = value.numer().to_i64() {
            return json!(small);
        }
    }
    Value::String(value.to_string())
}

/// Parses and validates a space file. Embedding metadata, when present, is
/// re-validated against the matrix.
pub fn parse_space(text: &str) -> Result<SpaceDocument, FormatError> {
    let root: Value = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    let object = root
        .as_object()
        .ok_or_else(|| schema("$", "expected a JSON object"))?;

    let labels: Vec<String> = object
        .get("labels")
        .ok_or_else(|| schema("$", "missing \"labels\""))?
        .as_array()
        .ok_or_else(|| schema("$.labels", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_str()
                .map(str::to_owned)
                .ok_or_else(|| schema(&format!("$.labels[{i}]"), "expected a string"))
        })
        .collect::<Result<_, _>>()?;

    let matrix: Vec<Vec<Scalar>> = object
        .get("matrix")
        .ok_or_else(|| schema("$", "missing \"matrix\""))?
        .as_array()
        .ok_or_else(|| schema("$.matrix", "expected an array of rows"))?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.as_array()
                .ok_or_else(|| schema(&format!("$.matrix[{i}]"), "expected an array"))?
                .iter()
                .enumerate()
                .map(|(j, entry)| scalar_from_value(entry, &format!("$.matrix[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let space = FiniteMetricSpace::new(labels, matrix)?;

    let embedded = match object.get("metadata") {
        None | Some(Value::Null) => None,
        Some(Value::Object(metadata)) => Some(parse_metadata(metadata, space.clone())?),
        Some(other) => {
            return Err(schema(
                "$.metadata",
                format!("expected an object, got {other}"),
            ))
        }
    };

    Ok(SpaceDocument { space, embedded })
}

fn parse_metadata(
    metadata: &Map<String, Value>,
    space: FiniteMetricSpace,
) -> Result<EmbeddedSpace, FormatError> {
    let block_of: Vec<usize> = metadata
        .get("block_of")
        .ok_or_else(|| schema("$.metadata", "missing \"block_of\""))?
        .as_array()
        .ok_or_else(|| schema("$.metadata.block_of", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_u64().map(|b| b as usize).ok_or_else(|| {
                schema(
                    &format!("$.metadata.block_of[{i}]"),
                    "expected a nonnegative integer",
                )
            })
        })
        .collect::<Result<_, _>>()?;

    let params = metadata
        .get("params")
        .ok_or_else(|| schema("$.metadata", "missing \"params\""))?
        .as_object()
        .ok_or_else(|| schema("$.metadata.params", "expected an object"))?;
    let r = scalar_from_value(
        params
            .get("r")
            .ok_or_else(|| schema("$.metadata.params", "missing \"r\""))?,
        "$.metadata.params.r",
    )?;
    let n = params
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema("$.metadata.params", "missing or invalid \"n\""))?
        as usize;

    let params = EmbeddingParams::new(r, n)?;
    Ok(EmbeddedSpace::from_parts(space, block_of, params)?)
}

fn space_value(space: &FiniteMetricSpace) -> Map<String, Value> {
    let mut object = Map::new();
    object.insert(
        "labels".to_owned(),
        Value::Array(space.labels().iter().map(|l| json!(l)).collect()),
    );
    object.insert(
        "matrix".to_owned(),
        Value::Array(
            space
                .matrix()
                .iter()
                .map(|row| Value::Array(row.iter().map(scalar_to_value).collect()))
                .collect(),
        ),
    );
    object
}

/// Canonical single-line serialization of a plain space.
pub fn serialize_space(space: &FiniteMetricSpace) -> String {
    Value::Object(space_value(space)).to_string()
}

/// Canonical single-line serialization of a glued space, including its
/// block decomposition and parameters.
pub fn serialize_embedded(embedded: &EmbeddedSpace) -> String {
    let mut object = space_value(embedded.space());
    object.insert(
        "metadata".to_owned(),
        json!({
            "block_of": embedded.block_of(),
            "params": {
                "r": scalar_to_value(embedded.params().r()),
                "n": embedded.params().n(),
            },
        }),
    );
    Value::Object(object).to_string()
}

/// Parses a points file `{"points": [[...], ...]}` with scalar entries.
pub fn parse_points(text: &str) -> Result<Vec<Vec<Scalar>>, FormatError> {
    let root: Value = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    root.as_object()
        .and_then(|o| o.get("points"))
        .ok_or_else(|| schema("$", "expected an object with \"points\""))?
        .as_array()
        .ok_or_else(|| schema("$.points", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, point)| {
            point
                .as_array()
                .ok_or_else(|| schema(&format!("$.points[{i}]"), "expected an array"))?
                .iter()
                .enumerate()
                .map(|(j, v)| scalar_from_value(v, &format!("$.points[{i}][{j}]")))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{embed, ProductPoint};

    #[test]
    fn parses_the_documented_example() {
        let doc = parse_space(r#"{"labels":["a","b"],"matrix":[[0,"3/2"],["3/2",0]]}"#).unwrap();
        assert_eq!(doc.space.len(), 2);
        assert_eq!(doc.space.distance(0, 1), &Scalar::ratio(3, 2));
        assert!(doc.embedded.is_none());
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let space = FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![Scalar::zero(), Scalar::ratio(3, 2), Scalar::from_int(2)],
                vec![Scalar::ratio(3, 2), Scalar::zero(), Scalar::ratio(1, 2)],
                vec![Scalar::from_int(2), Scalar::ratio(1, 2), Scalar::zero()],
            ],
        )
        .unwrap();
        let text = serialize_space(&space);
        let reparsed = parse_space(&text).unwrap();
        assert_eq!(reparsed.space, space);
        // Canonical form is stable under a second round trip.
        assert_eq!(serialize_space(&reparsed.space), text);
    }

    #[test]
    fn parse_then_serialize_yields_canonical_form() {
        let noisy = r#"{ "labels": ["a", "b"], "matrix": [[0, 1.5], ["6/4", 0]] }"#;
        let doc = parse_space(noisy).unwrap();
        assert_eq!(
            serialize_space(&doc.space),
            r#"{"labels":["a","b"],"matrix":[[0,"3/2"],["3/2",0]]}"#
        );
    }

    #[test]
    fn decimal_literals_parse_exactly() {
        let doc = parse_space(r#"{"labels":["a","b"],"matrix":[[0,0.1],[0.1,0]]}"#).unwrap();
        assert_eq!(doc.space.distance(0, 1), &Scalar::ratio(1, 10));
    }

    #[test]
    fn rejects_zero_denominator_and_bad_schema() {
        let err =
            parse_space(r#"{"labels":["a","b"],"matrix":[[0,"1/0"],["1/0",0]]}"#).unwrap_err();
        assert!(matches!(err, FormatError::Number { .. }));

        assert!(matches!(parse_space("not json"), Err(FormatError::Json(_))));
        assert!(matches!(
            parse_space(r#"{"labels":["a"],"matrix":"nope"}"#),
            Err(FormatError::Schema { .. })
        ));
        assert!(matches!(
            parse_space(r#"{"labels":["a","b"],"matrix":[[0,true],[1,0]]}"#),
            Err(FormatError::Schema { .. })
        ));
    }

    #[test]
    fn axiom_violations_pass_through() {
        let err = parse_space(r#"{"labels":["a","b"],"matrix":[[0,"-1"],["-1",0]]}"#).unwrap_err();
        assert!(matches!(err, FormatError::Metric(_)));
    }

    #[test]
    fn embedded_round_trip_keeps_metadata() {
        let tuple = ProductPoint::new(vec![FiniteMetricSpace::point("x")]).unwrap();
        let params = EmbeddingParams::new(Scalar::one(), 1).unwrap();
        let glued = embed(&tuple, &params).unwrap();
        let text = serialize_embedded(&glued);
        let doc = parse_space(&text).unwrap();
        let rebuilt = doc.embedded.expect("metadata preserved");
        assert_eq!(rebuilt, glued);
        assert_eq!(serialize_embedded(&rebuilt), text);
    }

    #[test]
    fn corrupted_metadata_is_rejected() {
        let tuple = ProductPoint::new(vec![FiniteMetricSpace::point("x")]).unwrap();
        let params = EmbeddingParams::new(Scalar::one(), 1).unwrap();
        let glued = embed(&tuple, &params).unwrap();
        let text = serialize_embedded(&glued).replace("\"n\":1", "\"n\":2");
        assert!(matches!(parse_space(&text), Err(FormatError::Embedding(_))));
    }

    #[test]
    fn points_file_parses() {
        let points = parse_points(r#"{"points": [[0, "1/2"], [1, 0.25]]}"#).unwrap();
        assert_eq!(points.len(), 2);
        assert_eq!(points[1][1], Scalar::ratio(1, 4));
        assert!(matches!(
            parse_points(r#"{"points": 3}"#),
            Err(FormatError::Schema { .. })
        ));
    }
}
