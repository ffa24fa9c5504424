//! CSV formatting and output plumbing.
//!
//! Floats are printed with 12 significant digits, plain decimal where the
//! exponent allows it and scientific otherwise, trailing zeros trimmed.
//! The representation is deterministic, so identical runs produce
//! byte-identical files.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Format with 12 significant digits, decimal point, no separators.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponential form");
    let exp: i32 = exp.parse().expect("exponent");
    let sign = if mantissa.starts_with('-') { "-" } else { "" };
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let mut out = String::from(sign);
    if (-4..12).contains(&exp) {
        if exp >= 0 {
            let int_len = exp as usize + 1;
            if digits.len() <= int_len {
                out.push_str(digits);
                out.push_str(&"0".repeat(int_len - digits.len()));
            } else {
                out.push_str(&digits[..int_len]);
                out.push('.');
                out.push_str(&digits[int_len..]);
            }
        } else {
            out.push_str("0.");
            out.push_str(&"0".repeat((-exp) as usize - 1));
            out.push_str(digits);
        }
    } else {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push('e');
        out.push_str(&exp.to_string());
    }
    out
}

/// Write `text` to `out` if given, stdout otherwise.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            CliError::Config(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Config(format!("cannot write stdout: {e}")))
        }
    }
}

/// Sidecar location: next to the output file, or a fixed name in the
/// working directory when output goes to stdout.
pub fn sidecar_path(out: Option<&Path>) -> PathBuf {
    match out {
        Some(path) => {
            let mut name = path.file_name().unwrap_or_default().to_os_string();
            name.push(".resolved.cfg");
            path.with_file_name(name)
        }
        None => PathBuf::from("vixbns.resolved.cfg"),
    }
}

pub fn write_sidecar(resolved: &str, out: Option<&Path>) -> Result<(), CliError> {
    let path = sidecar_path(out);
    std::fs::write(&path, resolved)
        .map_err(|e| CliError::Config(format!("cannot write sidecar {}: {e}", path.display())))
}
