//! Parsers for the textual descriptors accepted on the command line.
//!
//! - fields: `"13"`, `"25"` (any odd prime power) or `"p^n"` such as `"3^3"`
//! - characters: an exponent `j` (reduced mod `q - 1`, may be negative) or one
//!   of `eps`, `phi`, `chi4`, `chi4bar`
//! - elements: a coefficient code in `[0, q)` (the residue for prime fields),
//!   a negative integer (taken in the prime field), or `g^k`

use crate::characters::Character;
use crate::error::{FieldError, ParseError};
use crate::field::{FieldElement, FiniteField};

const MAX_TOKEN: usize = 64;

fn clip(s: &str) -> String {
    s.chars().take(MAX_TOKEN).collect()
}

fn parse_u64(s: &str) -> Option<u64> {
    if s.is_empty() || s.len() > 20 || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_i64(s: &str) -> Option<i64> {
    match s.strip_prefix('-') {
        Some(rest) => parse_u64(rest).and_then(|v| i64::try_from(v).ok()).map(|v| -v),
        None => parse_u64(s).and_then(|v| i64::try_from(v).ok()),
    }
}

/// Parses a field descriptor into `(p, n)` without building the field.
pub fn parse_field_descriptor(s: &str) -> Result<(u64, u32), ParseError> {
    let t = s.trim();
    let bad = || ParseError::FieldDescriptor(clip(s));
    match t.split_once('^') {
        Some((p, n)) => {
            let p = parse_u64(p.trim()).ok_or_else(bad)?;
            let n = parse_u64(n.trim()).and_then(|n| u32::try_from(n).ok()).ok_or_else(bad)?;
            Ok((p, n))
        }
        None => {
            let q = parse_u64(t).ok_or_else(bad)?;
            if q % 2 == 0 && q.is_power_of_two() {
                return Err(FieldError::EvenCharacteristic.into());
            }
            if q > crate::field::MAX_FIELD_ORDER {
                return Err(FieldError::TooLarge(q.to_string()).into());
            }
            crate::field::prime_power_parts(q).ok_or(ParseError::Field(FieldError::NotPrimePower(q)))
        }
    }
}

/// Parses and builds a field.
pub fn parse_field(s: &str) -> Result<FiniteField, ParseError> {
    let (p, n) = parse_field_descriptor(s)?;
    Ok(FiniteField::new(p, n)?)
}

/// Parses a comma-separated list of field descriptors.
pub fn parse_field_list(s: &str) -> Result<Vec<(u64, u32)>, ParseError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_field_descriptor).collect()
}

pub fn parse_character(s: &str, field: &FiniteField) -> Result<Character, ParseError> {
    let t = s.trim();
    let quartic = || Character::quartic(field).map_err(ParseError::from);
    match t {
        "eps" | "epsilon" => Ok(Character::trivial(field)),
        "phi" => Ok(Character::quadratic(field)),
        "chi4" => quartic(),
        "chi4bar" => Ok(quartic()?.conj()),
        _ => parse_i64(t)
            .map(|j| Character::of(field, j))
            .ok_or_else(|| ParseError::Character(clip(s))),
    }
}

pub fn parse_element(s: &str, field: &FiniteField) -> Result<FieldElement, ParseError> {
    let t = s.trim();
    let bad = || ParseError::Element(clip(s));
    if let Some(k) = t.strip_prefix("g^") {
        let k = parse_i64(k.trim()).ok_or_else(bad)?;
        return Ok(field.power_of_generator(k));
    }
    let v = parse_i64(t).ok_or_else(bad)?;
    if v < 0 {
        return Ok(field.from_int(v));
    }
    u32::try_from(v).ok().and_then(|c| field.from_code(c)).ok_or_else(bad)
}

/// Renders an element as its code.
pub fn format_element(y: FieldElement, field: &FiniteField) -> String {
    field.code(y).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_descriptors() {
        assert_eq!(parse_field_descriptor("13").unwrap(), (13, 1));
        assert_eq!(parse_field_descriptor("3^3").unwrap(), (3, 3));
        assert_eq!(parse_field_descriptor(" 25 ").unwrap(), (5, 2));
        assert_eq!(
            parse_field_descriptor("4").unwrap_err(),
            ParseError::Field(FieldError::EvenCharacteristic)
        );
        assert!(parse_field_descriptor("12").is_err());
        assert!(parse_field_descriptor("x").is_err());
        assert!(parse_field_descriptor("3^").is_err());
        assert!(parse_field_descriptor("-3").is_err());
        assert!(parse_field_descriptor("99999999999999999999999").is_err());
        assert!(matches!(parse_field("2^3"), Err(ParseError::Field(FieldError::EvenCharacteristic))));
        assert!(matches!(parse_field("9^1"), Err(ParseError::Field(FieldError::NotPrime(9)))));
        assert_eq!(parse_field_list("5,9,13").unwrap(), vec![(5, 1), (3, 2), (13, 1)]);
    }

    #[test]
    fn characters() {
        let f = parse_field("13").unwrap();
        assert_eq!(parse_character("3", &f).unwrap().exponent(), 3);
        assert_eq!(parse_character("-1", &f).unwrap().exponent(), 11);
        assert_eq!(parse_character("27", &f).unwrap().exponent(), 3);
        assert_eq!(parse_character("phi", &f).unwrap().exponent(), 6);
        assert_eq!(parse_character("chi4", &f).unwrap().exponent(), 3);
        assert_eq!(parse_character("chi4bar", &f).unwrap().exponent(), 9);
        assert!(parse_character("chi4", &parse_field("7").unwrap()).is_err());
        assert!(parse_character("psi", &f).is_err());
    }

    #[test]
    fn elements() {
        let f = parse_field("13").unwrap();
        assert_eq!(f.code(parse_element("7", &f).unwrap()), 7);
        assert_eq!(parse_element("g^1", &f).unwrap(), f.generator());
        assert_eq!(parse_element("-1", &f).unwrap(), f.minus_one());
        assert!(parse_element("13", &f).is_err());
        assert!(parse_element("g^", &f).is_err());
        assert_eq!(format_element(f.from_int(5), &f), "5");
    }
}
