use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = hme_cli::parse_config(std::env::args_os()).and_then(|cfg| hme_cli::run(&cfg));
    match outcome {
        Ok(written) => {
            for path in written {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            match &err {
                hme_cli::CliError::Info(text) => print!("{text}"),
                _ => eprintln!("hme: {err}"),
            }
            ExitCode::from(err.exit_code())
        }
    }
}
