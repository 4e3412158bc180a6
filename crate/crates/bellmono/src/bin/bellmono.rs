fn main() {
    std::process::exit(bellmono::cli::main_entry());
}
