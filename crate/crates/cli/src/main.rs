fn main() -> std::process::ExitCode {
    dlres_cli::main_exit()
}
