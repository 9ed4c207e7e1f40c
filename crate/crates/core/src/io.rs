//! Box files: a text format (`d n` then one box per line as
//! `lo_1 hi_1 … lo_d hi_d`) and a JSON mirror (`{"boxes": [[[lo, hi], …], …]}`).
//! Box ids are 0-based line (or array) order. Numbers are read exactly as
//! decimals (`-1.25`, `3e2`) or fractions (`7/3`).

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, Coord, Interval};

pub fn parse_coord(s: &str) -> std::result::Result<Coord, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Coord::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| format!("bad exponent in {s:?}"))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(format!("not a number: {s:?}"));
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = all.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    if scale.unsigned_abs() > 10_000 {
        return Err(format!("exponent out of range in {s:?}"));
    }
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Coord::from_integer(num * Pow::pow(&ten, scale as u32))
    } else {
        Coord::new(num, Pow::pow(&ten, (-scale) as u32))
    })
}

/// Exact decimal if the value has one, otherwise `p/q`.
pub fn format_coord(c: &Coord) -> String {
    if c.is_integer() {
        return c.numer().to_string();
    }
    let den = c.denom().magnitude().clone();
    let (mut twos, mut fives, mut rest) = (0u32, 0u32, den.clone());
    let (two, five) = (BigUint::from(2u32), BigUint::from(5u32));
    while rest.is_even() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", c.numer(), c.denom());
    }
    let places = twos.max(fives);
    let scaled = c.numer().magnitude() * Pow::pow(&BigUint::from(10u32), places) / den;
    let mut digits = scaled.to_string();
    while digits.len() <= places as usize {
        digits.insert(0, '0');
    }
    let split = digits.len() - places as usize;
    let sign = if c.is_negative() { "-" } else { "" };
    format!("{sign}{}.{}", &digits[..split], &digits[split..])
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn make_box(id: usize, coords: Vec<Coord>, line: usize) -> Result<AxisBox> {
    let mut sides = Vec::with_capacity(coords.len() / 2);
    let mut it = coords.into_iter();
    while let (Some(lo), Some(hi)) = (it.next(), it.next()) {
        sides.push(Interval::new(lo, hi).map_err(|e| parse_err(line, e.to_string()))?);
    }
    Ok(AxisBox::new(id, sides))
}

pub fn parse_boxes_text(text: &str) -> Result<Vec<AxisBox>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty box file"))?;
    let nums: Vec<&str> = header.split_whitespace().collect();
    let [d, n] = nums[..] else {
        return Err(parse_err(hline, "header must be `d n`"));
    };
    let d: usize = d.parse().map_err(|_| parse_err(hline, "bad dimension"))?;
    let n: usize = n.parse().map_err(|_| parse_err(hline, "bad box count"))?;
    if d == 0 {
        return Err(parse_err(hline, "dimension must be at least 1"));
    }
    let mut boxes = Vec::with_capacity(n);
    for (line, body) in lines {
        if boxes.len() == n {
            return Err(parse_err(line, format!("more than {n} boxes")));
        }
        let coords = body
            .split_whitespace()
            .map(parse_coord)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(line, e))?;
        if coords.len() != 2 * d {
            return Err(parse_err(
                line,
                format!("expected {} numbers, found {}", 2 * d, coords.len()),
            ));
        }
        boxes.push(make_box(boxes.len(), coords, line)?);
    }
    if boxes.len() != n {
        return Err(parse_err(0, format!("header promises {n} boxes, found {}", boxes.len())));
    }
    Ok(boxes)
}

fn json_coord(v: &Value, entry: usize) -> Result<Coord> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(parse_err(entry, "coordinates must be numbers")),
    };
    parse_coord(&text).map_err(|e| parse_err(entry, e))
}

/// `line` in errors is the 1-based box index.
pub fn parse_boxes_json(text: &str) -> Result<Vec<AxisBox>> {
    let root: Value = serde_json::from_str(text)?;
    let list = root
        .get("boxes")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err(0, "missing `boxes` array"))?;
    let mut boxes = Vec::with_capacity(list.len());
    for (i, entry) in list.iter().enumerate() {
        let sides = entry
            .as_array()
            .ok_or_else(|| parse_err(i + 1, "box must be a list of [lo, hi] pairs"))?;
        let mut coords = Vec::with_capacity(2 * sides.len());
        for side in sides {
            match side.as_array().map(Vec::as_slice) {
                Some([lo, hi]) => {
                    coords.push(json_coord(lo, i + 1)?);
                    coords.push(json_coord(hi, i + 1)?);
                }
                _ => return Err(parse_err(i + 1, "side must be [lo, hi]")),
            }
        }
        boxes.push(make_box(i, coords, i + 1)?);
    }
    let expect = |key: &str, actual: usize| -> Result<()> {
        match root.get(key).map(Value::as_u64) {
            None => Ok(()),
            Some(Some(v)) if v as usize == actual => Ok(()),
            _ => Err(parse_err(0, format!("`{key}` does not match the boxes"))),
        }
    };
    expect("n", boxes.len())?;
    if let Some(first) = boxes.first() {
        expect("d", first.dim())?;
    }
    Ok(boxes)
}

/// JSON if the first non-blank character is `{`, text otherwise.
pub fn parse_boxes(text: &str) -> Result<Vec<AxisBox>> {
    if text.trim_start().starts_with('{') {
        parse_boxes_json(text)
    } else {
        parse_boxes_text(text)
    }
}

pub fn write_boxes_text(boxes: &[AxisBox]) -> String {
    let d = boxes.first().map_or(0, AxisBox::dim);
    let mut out = format!("{d} {}\n", boxes.len());
    for b in boxes {
        let line: Vec<String> = b
            .sides
            .iter()
            .flat_map(|s| [format_coord(&s.lo), format_coord(&s.hi)])
            .collect();
        writeln!(out, "{}", line.join(" ")).expect("writing to a String");
    }
    out
}
