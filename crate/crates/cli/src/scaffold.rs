//! GitHub Actions workflow that reruns the pipeline and commits changed
//! metadata files.

use std::path::Path;

use crate::commands::{EXPANDED_FILE, FRAMED_FILE, NTRIPLES_FILE};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaffoldOptions {
    pub config: String,
    pub out: String,
    pub online: bool,
    pub branch: String,
    pub install_command: String,
}

impl Default for ScaffoldOptions {
    fn default() -> Self {
        ScaffoldOptions {
            config: "metaforge.json".into(),
            out: ".".into(),
            online: false,
            branch: "main".into(),
            install_command: "cargo install --locked metaforge".into(),
        }
    }
}

fn yaml_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

fn shell_quote(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "-_./".contains(c)) {
        s.into()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

pub fn github_actions_workflow(o: &ScaffoldOptions) -> String {
    let files: Vec<String> = [FRAMED_FILE, EXPANDED_FILE, NTRIPLES_FILE]
        .iter()
        .map(|f| {
            Path::new(&o.out)
                .join(f)
                .to_string_lossy()
                .trim_start_matches("./")
                .to_string()
        })
        .collect();
    let mut run = format!(
        "metaforge pipeline --config {} --out {}",
        shell_quote(&o.config),
        shell_quote(&o.out)
    );
    if o.online {
        run.push_str(" --online");
    }
    format!(
        "\
name: Generate CodeMeta

on:
  push:
    branches: [{branch}]
  release:
    types: [published]
  workflow_dispatch:

permissions:
  contents: write

jobs:
  codemeta:
    runs-on: ubuntu-latest
    steps:
      - uses: actions/checkout@v4
      - name: Install metaforge
        run: {install}
      - name: Generate and validate CodeMeta
        run: {run}
      - name: Commit changed metadata
        uses: stefanzweifel/git-auto-commit-action@v5
        with:
          commit_message: Update CodeMeta metadata
          file_pattern: {pattern}
",
        branch = yaml_quote(&o.branch),
        install = yaml_quote(&o.install_command),
        run = yaml_quote(&run),
        pattern = yaml_quote(&files.join(" ")),
    )
}
