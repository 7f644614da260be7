//! Praat TextGrid (long format) parsing and serialization.
//!
//! Only the long format is supported; the short format (bare values, no
//! `key = value` lines) is rejected with a dedicated error.

use std::str::FromStr;

use super::{AlignmentError, AlignmentTrack, PhoneInterval};
use crate::lexicon::PhoneUnit;

/// Extracts the interval tier named `tier_name` as an alignment track.
/// Empty-label and "sp"/"sil" intervals become Silence.
pub fn parse_textgrid(text: &str, tier_name: &str) -> Result<AlignmentTrack, AlignmentError> {
    let lines: Vec<&str> = text.lines().map(str::trim).collect();

    let header_ok = lines.iter().take(3).any(|l| l.contains("ooTextFile"));
    if !header_ok || !lines.iter().take(3).any(|l| l.contains("\"TextGrid\"")) {
        return Err(AlignmentError::parse("header", "not a TextGrid file"));
    }
    // Short format carries the class as a bare quoted line instead of a
    // `class = "IntervalTier"` assignment.
    if lines.contains(&"\"IntervalTier\"") {
        return Err(AlignmentError::ShortFormat);
    }

    let mut idx = 0usize;
    while idx < lines.len() {
        if !is_item_header(lines[idx]) {
            idx += 1;
            continue;
        }
        let item_start = idx + 1;
        let class = find_string_field(&lines[item_start..], "class");
        let name = find_string_field(&lines[item_start..], "name");
        if class.as_deref() == Some("IntervalTier") && name.as_deref() == Some(tier_name) {
            return parse_interval_tier(&lines[item_start..]);
        }
        idx += 1;
    }
    Err(AlignmentError::MissingTier(tier_name.to_string()))
}

fn is_item_header(line: &str) -> bool {
    let rest = match line.strip_prefix("item") {
        Some(rest) => rest.trim_start(),
        None => return false,
    };
    rest.starts_with('[') && rest.contains(']') && rest.ends_with(':') && !rest.starts_with("[]")
}

/// Scans forward for `key = "value"`, stopping at the next item header so
/// one tier's fields never leak into the next.
fn find_string_field(lines: &[&str], key: &str) -> Option<String> {
    for line in lines {
        if is_item_header(line) {
            return None;
        }
        if let Some((k, v)) = split_assignment(line) {
            if k == key {
                return Some(unquote(&v));
            }
        }
    }
    None
}

fn split_assignment(line: &str) -> Option<(String, String)> {
    let (k, v) = line.split_once('=')?;
    Some((k.trim().to_string(), v.trim().to_string()))
}

fn unquote(value: &str) -> String {
    let v = value.trim();
    let v = v.strip_prefix('"').unwrap_or(v);
    let v = v.strip_suffix('"').unwrap_or(v);
    v.replace("\"\"", "\"")
}

fn parse_f64(value: &str, location: &str) -> Result<f64, AlignmentError> {
    f64::from_str(value.trim())
        .map_err(|_| AlignmentError::parse(location, format!("expected a number, got {value:?}")))
}

fn parse_interval_tier(lines: &[&str]) -> Result<AlignmentTrack, AlignmentError> {
    let mut tier_xmax: Option<f64> = None;
    let mut interval_count: Option<usize> = None;
    let mut header_end = lines.len();

    for (i, line) in lines.iter().enumerate() {
        if is_item_header(line) {
            break;
        }
        if let Some(rest) = line.strip_prefix("intervals") {
            // "intervals: size = N"
            if let Some(size) = rest.trim_start().strip_prefix(':') {
                if let Some((k, v)) = split_assignment(size) {
                    if k == "size" {
                        interval_count = Some(parse_f64(&v, "intervals size")? as usize);
                        header_end = i + 1;
                        break;
                    }
                }
            }
        }
        if let Some((k, v)) = split_assignment(line) {
            if k == "xmax" {
                tier_xmax = Some(parse_f64(&v, "tier xmax")?);
            }
        }
    }

    let tier_xmax = tier_xmax.ok_or_else(|| AlignmentError::parse("tier", "missing tier xmax"))?;
    let interval_count =
        interval_count.ok_or_else(|| AlignmentError::parse("tier", "missing intervals size"))?;

    let mut intervals = Vec::with_capacity(interval_count);
    let mut cursor = header_end;
    for n in 1..=interval_count {
        let location = format!("interval {n}");
        // seek the "intervals [n]:" header
        while cursor < lines.len() && !lines[cursor].starts_with("intervals [") {
            if is_item_header(lines[cursor]) {
                return Err(AlignmentError::parse(&location, "tier ended early"));
            }
            cursor += 1;
        }
        if cursor >= lines.len() {
            return Err(AlignmentError::parse(&location, "tier ended early"));
        }
        cursor += 1;

        let mut xmin: Option<f64> = None;
        let mut xmax: Option<f64> = None;
        let mut text: Option<String> = None;
        while cursor < lines.len()
            && !lines[cursor].starts_with("intervals [")
            && !is_item_header(lines[cursor])
        {
            if let Some((k, v)) = split_assignment(lines[cursor]) {
                match k.as_str() {
                    "xmin" => xmin = Some(parse_f64(&v, &location)?),
                    "xmax" => xmax = Some(parse_f64(&v, &location)?),
                    "text" => text = Some(unquote(&v)),
                    _ => {}
                }
            }
            cursor += 1;
        }
        let xmin = xmin.ok_or_else(|| AlignmentError::parse(&location, "missing xmin"))?;
        let xmax = xmax.ok_or_else(|| AlignmentError::parse(&location, "missing xmax"))?;
        let text = text.ok_or_else(|| AlignmentError::parse(&location, "missing text"))?;

        if xmax <= xmin {
            return Err(AlignmentError::parse(&location, "xmax<xmin"));
        }
        if let Some(prev) = intervals.last() {
            let prev: &PhoneInterval = prev;
            if xmin < prev.end {
                return Err(AlignmentError::parse(
                    &location,
                    "intervals unsorted or overlapping",
                ));
            }
        }

        let phone = parse_label(&text).map_err(|e| AlignmentError::parse(&location, e))?;
        // silence labels carry no pose identity beyond Silence itself, and
        // labeled intervals carry their parsed unit
        intervals.push(PhoneInterval {
            phone,
            start: xmin,
            end: xmax,
        });
    }

    let track = AlignmentTrack {
        intervals,
        total_duration: tier_xmax,
    };
    track.validate()?;
    Ok(track)
}

fn parse_label(text: &str) -> Result<PhoneUnit, String> {
    let trimmed = text.trim();
    if trimmed.is_empty()
        || trimmed.eq_ignore_ascii_case("sp")
        || trimmed.eq_ignore_ascii_case("sil")
    {
        return Ok(PhoneUnit::Silence);
    }
    trimmed
        .parse::<PhoneUnit>()
        .map_err(|e| format!("bad label {trimmed:?}: {e}"))
}

/// Writes a single-tier long-format TextGrid. Numbers use the shortest
/// representation that round-trips, so parse(serialize(track)) restores
/// the intervals exactly.
pub fn serialize_textgrid(track: &AlignmentTrack, tier_name: &str) -> String {
    let mut out = String::new();
    out.push_str("File type = \"ooTextFile\"\n");
    out.push_str("Object class = \"TextGrid\"\n\n");
    out.push_str("xmin = 0\n");
    out.push_str(&format!("xmax = {}\n", track.total_duration));
    out.push_str("tiers? <exists>\n");
    out.push_str("size = 1\n");
    out.push_str("item []:\n");
    out.push_str("    item [1]:\n");
    out.push_str("        class = \"IntervalTier\"\n");
    out.push_str(&format!("        name = \"{tier_name}\"\n"));
    out.push_str("        xmin = 0\n");
    out.push_str(&format!("        xmax = {}\n", track.total_duration));
    out.push_str(&format!(
        "        intervals: size = {}\n",
        track.intervals.len()
    ));
    for (i, interval) in track.intervals.iter().enumerate() {
        let label = match &interval.phone {
            PhoneUnit::Silence => String::new(),
            other => other.to_string(),
        };
        out.push_str(&format!("        intervals [{}]:\n", i + 1));
        out.push_str(&format!("            xmin = {}\n", interval.start));
        out.push_str(&format!("            xmax = {}\n", interval.end));
        out.push_str(&format!(
            "            text = \"{}\"\n",
            label.replace('"', "\"\"")
        ));
    }
    out
}
