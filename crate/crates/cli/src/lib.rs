//! Scene-file front end: parse a scene, run its commands in order, render
//! the results as a table, csv or records.

pub mod declared;
pub mod error;
pub mod eval;
pub mod render;
pub mod scene;

pub use error::CliError;
pub use eval::{exit_code, run_scene, Block, Options, Section};
pub use render::{render, Format, Style};
pub use scene::{parse_scene, Scene};

/// Rendered output of a whole run.
#[derive(Debug)]
pub struct RunOutput {
    pub stdout: String,
    pub error: Option<CliError>,
    pub code: i32,
}

/// Parse and run `text`; output of commands before an error is kept.
pub fn run_text(text: &str, opts: &Options, style: Style) -> RunOutput {
    let scene = match parse_scene(text) {
        Ok(s) => s,
        Err(e) => return RunOutput { stdout: String::new(), error: Some(e), code: 1 },
    };
    match run_scene(&scene, opts) {
        Ok(sections) => RunOutput { stdout: render(&sections, style), error: None, code: exit_code(&sections) },
        Err(p) => RunOutput { stdout: render(&p.sections, style), error: Some(p.error), code: 1 },
    }
}

/// A built-in scenario (or `all`) as a one-command scene.
pub fn scenario_scene(name: &str) -> String {
    format!("cmd scenario {name}\n")
}
