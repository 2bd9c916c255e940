fn main() -> std::process::ExitCode {
    stable_ar2::cli::main_entry()
}
