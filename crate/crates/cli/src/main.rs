use std::process::ExitCode;

fn main() -> ExitCode {
    let env_fixtures = std::env::var_os(metaforge::config::FIXTURES_ENV).map(Into::into);
    let code = metaforge::run(
        std::env::args_os(),
        env_fixtures,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}
