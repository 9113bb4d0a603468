#![allow(dead_code)]

use std::process::{Command, Output};

use clap::Parser;
use lenstight_cli::Cli;

/// Every subcommand, in text and JSON mode.
pub const FIXTURES: &[&[&str]] = &[
    &["cf", "17", "7"],
    &["cf", "13", "11"],
    &["cf", "5", "1"],
    &["cf", "52", "11"],
    &["tight", "17", "7"],
    &["tight", "4", "3"],
    &["tight", "4", "1"],
    &["tight", "34", "7"],
    &["slices", "17", "7"],
    &["slices", "17", "7", "--rot", "1,0,-2"],
    &["slices", "52", "11", "--rot", "-3,0,1"],
    &["covers", "52", "11"],
    &["covers", "56", "15"],
    &["lift", "34", "7", "2"],
    &["lift", "52", "11", "13"],
    &["lift", "56", "15", "2"],
    &["lift", "56", "15", "2", "--rot", "2,0,2"],
    &["fillings", "56", "15", "--rot", "0,0,0"],
    &["fillings", "34", "7", "--rot", "3,1"],
    &["fillings", "56", "15", "--rot", "2,0,2"],
    &["fillings", "17", "7"],
    &["embed", "17", "7"],
    &["embed", "56", "15"],
];

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lenstight"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8")
}

pub fn parse(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("lenstight").chain(args.iter().copied()))
        .expect("valid arguments")
}
