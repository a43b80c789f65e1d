//! JSON interchange for user-supplied posets and set-valued maps.
//!
//! The document is an object with `"elements"` (strings or two-number
//! coordinate pairs), `"leq"` (pairs of element references) and optionally
//! `"map"` (object from element name to an array of element references)
//! and `"x0"` (element reference used as the iteration seed).  Array order
//! carries no meaning: the poset is the reflexive-transitive closure of
//! the listed relation.  Coordinate pairs are normalized to the canonical
//! `"(x, y)"` spelling, with exact decimals preferred over fractions.

use serde_json::Value;

use crate::scalar::{format_rational, parse_rational};

use super::map::SetValuedMap;
use super::{FinitePoset, PosetError};

/// A parsed interchange document.
#[derive(Debug, Clone)]
pub struct PosetDocument {
    pub poset: FinitePoset<String>,
    pub map: Option<SetValuedMap>,
    pub x0: Option<usize>,
}

fn bad(message: impl Into<String>) -> PosetError {
    PosetError::BadData(message.into())
}

fn coordinate_text(value: &Value) -> Result<String, PosetError> {
    let raw = match value {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(bad(format!("coordinate {other} is not a number or string"))),
    };
    let rational = parse_rational(&raw)
        .ok_or_else(|| bad(format!("coordinate {raw:?} is not a rational number")))?;
    Ok(format_rational(&rational))
}

/// Canonical name of an element reference: a string stays itself, a
/// two-entry array becomes `"(x, y)"` with normalized coordinates.
fn element_name(value: &Value) -> Result<String, PosetError> {
    match value {
        Value::String(s) => Ok(s.clone()),
        Value::Array(pair) if pair.len() == 2 => Ok(format!(
            "({}, {})",
            coordinate_text(&pair[0])?,
            coordinate_text(&pair[1])?
        )),
        other => Err(bad(format!(
            "element reference {other} is neither a string nor a coordinate pair"
        ))),
    }
}

/// Parses an interchange document from JSON text.
pub fn parse_poset_document(text: &str) -> Result<PosetDocument, PosetError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    document_from_value(&value)
}

/// Parses an interchange document from an already-decoded JSON value.
pub fn document_from_value(value: &Value) -> Result<PosetDocument, PosetError> {
    let object = value
        .as_object()
        .ok_or_else(|| bad("document root must be a JSON object"))?;

    let elements_value = object
        .get("elements")
        .ok_or_else(|| bad("missing \"elements\" array"))?
        .as_array()
        .ok_or_else(|| bad("\"elements\" must be an array"))?;
    let elements: Vec<String> = elements_value
        .iter()
        .map(element_name)
        .collect::<Result<_, _>>()?;

    let leq_value = object
        .get("leq")
        .ok_or_else(|| bad("missing \"leq\" array"))?
        .as_array()
        .ok_or_else(|| bad("\"leq\" must be an array"))?;
    let mut pairs = Vec::with_capacity(leq_value.len());
    for entry in leq_value {
        let pair = entry
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| bad(format!("\"leq\" entry {entry} is not a pair")))?;
        pairs.push((element_name(&pair[0])?, element_name(&pair[1])?));
    }
    let poset = FinitePoset::new(elements, &pairs)?;

    let map = match object.get("map") {
        None | Some(Value::Null) => None,
        Some(Value::Object(table)) => {
            let mut images = std::collections::BTreeMap::new();
            for (key, image_value) in table {
                let x = poset
                    .index_of(key)
                    .ok_or_else(|| PosetError::UnknownElement(key.clone()))?;
                let image_array = image_value
                    .as_array()
                    .ok_or_else(|| bad(format!("image of {key} must be an array")))?;
                let mut image = Vec::with_capacity(image_array.len());
                for entry in image_array {
                    let name = element_name(entry)?;
                    let y = poset
                        .index_of(&name)
                        .ok_or(PosetError::UnknownElement(name))?;
                    image.push(y);
                }
                images.insert(x, image);
            }
            Some(SetValuedMap::new(poset.len(), images)?)
        }
        Some(other) => return Err(bad(format!("\"map\" must be an object, got {other}"))),
    };

    let x0 = match object.get("x0") {
        None | Some(Value::Null) => None,
        Some(reference) => {
            let name = element_name(reference)?;
            Some(
                poset
                    .index_of(&name)
                    .ok_or(PosetError::UnknownElement(name))?,
            )
        }
    };

    Ok(PosetDocument { poset, map, x0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_string_poset_with_a_map_and_seed() {
        let doc = parse_poset_document(
            r#"{
                "elements": ["bot", "mid", "top"],
                "leq": [["bot", "mid"], ["mid", "top"]],
                "map": {"bot": ["mid"], "mid": ["mid", "top"], "top": ["top"]},
                "x0": "bot"
            }"#,
        )
        .unwrap();
        assert_eq!(doc.poset.len(), 3);
        let (bot, top) = (
            doc.poset.index_of(&"bot".to_string()).unwrap(),
            doc.poset.index_of(&"top".to_string()).unwrap(),
        );
        assert!(doc.poset.leq(bot, top), "closure fills in bot <= top");
        assert_eq!(doc.x0, Some(bot));
        let map = doc.map.unwrap();
        assert_eq!(map.image(bot).unwrap().len(), 1);
    }

    #[test]
    fn coordinate_pairs_normalize_to_canonical_names() {
        let doc = parse_poset_document(
            r#"{
                "elements": [[0, 0], [1.5, 0.5], ["3/2", 1]],
                "leq": [[[0, 0], [1.5, 0.5]]]
            }"#,
        )
        .unwrap();
        let names: Vec<&String> = doc.poset.elements().iter().collect();
        assert!(names.contains(&&"(0, 0)".to_string()));
        assert!(names.contains(&&"(1.5, 0.5)".to_string()));
        assert!(names.contains(&&"(1.5, 1)".to_string()), "fraction text normalizes");
        assert!(doc.map.is_none());
        assert!(doc.x0.is_none());
    }

    #[test]
    fn malformed_documents_are_rejected_with_context() {
        assert!(matches!(
            parse_poset_document("[1, 2]"),
            Err(PosetError::BadData(_))
        ));
        assert!(matches!(
            parse_poset_document(r#"{"elements": ["a"], "leq": [["a"]]}"#),
            Err(PosetError::BadData(_))
        ));
        assert!(matches!(
            parse_poset_document(
                r#"{"elements": ["a"], "leq": [], "map": {"ghost": ["a"]}}"#
            ),
            Err(PosetError::UnknownElement(_))
        ));
        assert!(matches!(
            parse_poset_document(r#"{"elements": ["a", "a"], "leq": []}"#),
            Err(PosetError::DuplicateElement(_))
        ));
    }
}
