use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_bytes, write_atomic};
use crate::error::{IoError, ValidationError, Violation};
use crate::model::{validate_evalset, EvalSchema, EvalSet, RawRecord};

/// Optional first line of a predictions file: `{"schema": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaHeader {
    pub schema: EvalSchema,
}

#[derive(Serialize)]
struct RecordLine<'a> {
    id: &'a str,
    action_scores: &'a [f64],
    reason_scores: &'a [f64],
    action_labels: Vec<u8>,
    reason_labels: Vec<u8>,
}

pub fn read_schema(path: &Path) -> Result<EvalSchema, IoError> {
    let bytes = read_bytes(path)?;
    let schema: EvalSchema =
        serde_json::from_slice(&bytes).map_err(|e| IoError::parse(path, e.line(), e.to_string()))?;
    schema
        .check()
        .map_err(|e| IoError::parse(path, 1, format!("invalid schema: {e}")))?;
    Ok(schema)
}

/// Read a predictions JSONL file. The schema comes from an embedded header
/// line, from `schema_path`, or both (in which case they must agree).
pub fn read_predictions(path: &Path, schema_path: Option<&Path>) -> Result<EvalSet, IoError> {
    let external = schema_path.map(read_schema).transpose()?;
    let bytes = read_bytes(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| IoError::parse(path, 1, format!("not UTF-8: {e}")))?;
    parse_predictions(text, path, external)
}

/// Parse JSONL text; `origin` is only used in error messages.
pub fn parse_predictions(text: &str, origin: &Path, external: Option<EvalSchema>) -> Result<EvalSet, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();

    let mut embedded = None;
    if let Some(&(line_no, first)) = lines.peek() {
        let value: serde_json::Value =
            serde_json::from_str(first).map_err(|e| IoError::parse(origin, line_no, e.to_string()))?;
        if value.get("schema").is_some() {
            let header: SchemaHeader = serde_json::from_value(value)
                .map_err(|e| IoError::parse(origin, line_no, format!("bad schema header: {e}")))?;
            header
                .schema
                .check()
                .map_err(|e| IoError::parse(origin, line_no, format!("invalid schema: {e}")))?;
            embedded = Some(header.schema);
            lines.next();
        }
    }

    let schema = match (embedded, external) {
        (Some(a), Some(b)) if a != b => return Err(IoError::SchemaConflict { path: origin.into() }),
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => {
            // an empty file is reported as an empty set, not a missing schema
            if lines.peek().is_none() {
                return Err(ValidationError::Invalid(vec![Violation::EmptySet]).into());
            }
            return Err(IoError::SchemaMissing { path: origin.into() });
        }
    };

    let (n_action, n_reason) = (schema.action_task.len(), schema.reason_task.len());
    let mut raws = Vec::new();
    for (line_no, line) in lines {
        let raw: RawRecord = serde_json::from_str(line).map_err(|e| IoError::parse(origin, line_no, e.to_string()))?;
        let lengths = [
            ("action_scores", raw.action_scores.len(), n_action),
            ("reason_scores", raw.reason_scores.len(), n_reason),
            ("action_labels", raw.action_labels.len(), n_action),
            ("reason_labels", raw.reason_labels.len(), n_reason),
        ];
        for (field, found, expected) in lengths {
            if found != expected {
                return Err(IoError::parse(
                    origin,
                    line_no,
                    format!(
                        "record `{}`: {field} has {found} entries, schema expects {expected}",
                        raw.id
                    ),
                ));
            }
        }
        raws.push(raw);
    }
    Ok(validate_evalset(raws, schema)?)
}

/// Serialize a set as JSONL, optionally led by a schema header line.
pub fn render_predictions(es: &EvalSet, embed_schema: bool) -> String {
    let mut out = String::new();
    if embed_schema {
        let header = SchemaHeader {
            schema: es.schema().clone(),
        };
        out.push_str(&serde_json::to_string(&header).expect("schema serializes"));
        out.push('\n');
    }
    let bits = |t: &[bool]| t.iter().map(|&b| u8::from(b)).collect();
    for r in es.records() {
        let line = RecordLine {
            id: &r.id,
            action_scores: &r.action_scores,
            reason_scores: &r.reason_scores,
            action_labels: bits(&r.action_truth),
            reason_labels: bits(&r.reason_truth),
        };
        out.push_str(&serde_json::to_string(&line).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn write_predictions(es: &EvalSet, path: &Path, embed_schema: bool) -> Result<(), IoError> {
    write_atomic(path, render_predictions(es, embed_schema).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema_line() -> String {
        serde_json::to_string(&SchemaHeader {
            schema: EvalSchema::numbered(2, 3).unwrap(),
        })
        .unwrap()
    }

    const REC: &str = r#"{"id":"a","action_scores":[0.1,0.9],"reason_scores":[0.2,0.3,0.4],"action_labels":[0,1],"reason_labels":[1,0,0]}"#;

    #[test]
    fn header_and_records() {
        let text = format!("{}\n{REC}\n{}\n", schema_line(), REC.replace("\"a\"", "\"b\""));
        let es = parse_predictions(&text, Path::new("p.jsonl"), None).unwrap();
        assert_eq!(es.len(), 2);
        assert_eq!(es.records()[0].action_truth, vec![false, true]);
        assert_eq!(render_predictions(&es, true), text);
    }

    #[test]
    fn short_vector_names_its_line() {
        let bad = REC.replace("[0.2,0.3,0.4]", "[0.2,0.3]");
        let text = format!("{REC}\n{bad}\n");
        let err =
            parse_predictions(&text, Path::new("p.jsonl"), Some(EvalSchema::numbered(2, 3).unwrap())).unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn missing_schema_and_empty_file() {
        let err = parse_predictions(REC, Path::new("p.jsonl"), None).unwrap_err();
        assert!(matches!(err, IoError::SchemaMissing { .. }));

        let err = parse_predictions("", Path::new("p.jsonl"), None).unwrap_err();
        assert!(matches!(&err, IoError::Validation(v) if v.violations() == [Violation::EmptySet]));
        let err = parse_predictions(&schema_line(), Path::new("p.jsonl"), None).unwrap_err();
        assert!(matches!(&err, IoError::Validation(v) if v.is_empty_set()));
    }

    #[test]
    fn conflicting_schemas() {
        let text = format!("{}\n{REC}\n", schema_line());
        let err = parse_predictions(&text, Path::new("p"), Some(EvalSchema::numbered(2, 4).unwrap())).unwrap_err();
        assert!(matches!(err, IoError::SchemaConflict { .. }));
    }

    #[test]
    fn bad_json_and_unknown_keys() {
        let text = format!("{}\n{{not json\n", schema_line());
        assert!(matches!(
            parse_predictions(&text, Path::new("p"), None),
            Err(IoError::Parse { line: 2, .. })
        ));
        let extra = REC.replace("\"id\":\"a\"", "\"id\":\"a\",\"extra\":1");
        let text = format!("{}\n{extra}\n", schema_line());
        assert!(matches!(
            parse_predictions(&text, Path::new("p"), None),
            Err(IoError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn range_errors_are_validation_errors() {
        let text = format!("{}\n{}\n", schema_line(), REC.replace("0.9", "1.2"));
        let err = parse_predictions(&text, Path::new("p"), None).unwrap_err();
        assert!(
            matches!(&err, IoError::Validation(v) if matches!(v.violations()[0], Violation::ScoreOutOfRange { .. }))
        );
    }
}
