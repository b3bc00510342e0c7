use std::io::Write;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::OutputArgs;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

pub fn json<T: Serialize>(command: &str, body: &T) -> Result<String> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        body,
    };
    let mut s = serde_json::to_string_pretty(&env)?;
    s.push('\n');
    Ok(s)
}

pub fn emit(out: &OutputArgs, text: &str) -> Result<()> {
    match &out.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

/// 17 significant digits, `inf` for infinities.
pub fn full(v: f64) -> String {
    ewens_pitman::ldp::format_full(v)
}
