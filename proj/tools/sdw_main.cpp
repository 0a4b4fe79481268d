#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "sdw/config.hpp"

namespace {

void usage(std::ostream& os) {
    os << "usage: sdw [COMMAND] [--config FILE] [--key value | --key=value ...]\n"
          "commands: entropy pressure dimension gapcheck cover construct subsystem\n"
          "          beta.expand1 beta.admissible beta.full beta.digits orbit furstenberg\n"
          "Flags mirror config keys (e.g. --shift.kind full --nmax 18); flags win\n"
          "over the config file.  SDW_ENUM_CAP overrides the enumeration cap.\n";
}

} // namespace

int main(int argc, char** argv) {
    sdw::ExperimentConfig cfg;
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> flags;
    try {
        for (int i = 1; i < argc; ++i) {
            std::string arg = argv[i];
            if (arg == "-h" || arg == "--help") {
                usage(std::cout);
                return sdw::kExitOk;
            }
            if (arg.rfind("--", 0) == 0) {
                std::string key = arg.substr(2), val;
                size_t eq = key.find('=');
                if (eq != std::string::npos) {
                    val = key.substr(eq + 1);
                    key = key.substr(0, eq);
                } else {
                    if (i + 1 >= argc)
                        throw sdw::ConfigError("flag --" + key + " needs a value");
                    val = argv[++i];
                }
                if (key == "config")
                    config_path = val;
                else
                    flags.emplace_back(key, val);
            } else if (!cfg.has("cmd")) {
                flags.emplace_back("cmd", arg);
                cfg.kv["cmd"] = arg; // reserve the positional slot
            } else {
                throw sdw::ConfigError("unexpected positional argument '" + arg + "'");
            }
        }
        cfg.kv.clear();
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw sdw::ConfigError("cannot read config file '" + config_path + "'");
            std::stringstream ss;
            ss << f.rdbuf();
            cfg = sdw::parse_config(ss.str());
        }
        // Flags win over the file; route them through the parser so unknown
        // keys are rejected identically.
        for (const auto& [k, v] : flags) {
            sdw::ExperimentConfig one = sdw::parse_config(k + "=" + v);
            for (const auto& [pk, pv] : one.kv) cfg.kv[pk] = pv;
        }
    } catch (const std::exception& e) {
        nlohmann::json j{{"error", "config"}, {"message", e.what()}};
        std::cerr << j.dump() << "\n";
        return sdw::kExitConfig;
    }
    return sdw::run(std::move(cfg), std::cout, std::cerr);
}
