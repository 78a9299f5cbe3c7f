use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// An input problem; reported on stderr with exit code 2.
#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

#[derive(Serialize)]
struct Json<'a> {
    command: &'a [String],
    input_digest: Option<String>,
    result: &'a Value,
    duration: f64,
}

pub struct Report {
    command: Vec<String>,
    hasher: Option<Sha256>,
    started: Instant,
    pub result: Value,
    pub text: String,
}

impl Report {
    pub fn start(command: Vec<String>) -> Self {
        Report {
            command,
            hasher: None,
            started: Instant::now(),
            result: Value::Null,
            text: String::new(),
        }
    }

    /// Folds bytes into the input digest.
    pub fn digest(&mut self, bytes: &[u8]) {
        self.hasher.get_or_insert_with(Sha256::new).update(bytes);
    }

    pub fn print(self, json: bool) {
        if json {
            let digest = self.hasher.map(|h| {
                let bytes = h.finalize();
                let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
                format!("sha256:{hex}")
            });
            let out = Json {
                command: &self.command,
                input_digest: digest,
                result: &self.result,
                duration: self.started.elapsed().as_secs_f64(),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
        } else {
            print!("{}", self.text);
        }
    }
}
