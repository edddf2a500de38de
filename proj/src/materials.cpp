#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "soen/error.hpp"
#include "soen/htron.hpp"

namespace soen::htron {

void MaterialProps::validate() const {
    if (name.empty()) throw ConfigError("material has no name");
    if (!(density > 0.0)) throw ConfigError("material " + name + ": density must be positive");
    if (!(thermal_conductivity > 0.0))
        throw ConfigError("material " + name + ": thermal_conductivity must be positive");
    if (!(cv_linear >= 0.0) || !(cv_cubic >= 0.0))
        throw ConfigError("material " + name + ": heat capacity coefficients must be non-negative");
    if (cv_linear == 0.0 && cv_cubic == 0.0)
        throw ConfigError("material " + name + ": heat capacity vanishes");
}

MaterialTable parse_materials(const std::string& text) {
    MaterialTable table;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        MaterialProps m;
        if (!(fields >> m.name)) continue;
        if (!(fields >> m.density >> m.thermal_conductivity >> m.cv_linear >> m.cv_cubic))
            throw ConfigError("materials line " + std::to_string(lineno) + ": expected 5 fields");
        std::string extra;
        if (fields >> extra)
            throw ConfigError("materials line " + std::to_string(lineno) + ": trailing field '" + extra + "'");
        m.validate();
        if (!table.emplace(m.name, m).second)
            throw ConfigError("materials line " + std::to_string(lineno) + ": duplicate material " + m.name);
    }
    return table;
}

MaterialTable load_materials(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open materials file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_materials(buf.str());
}

std::string format_materials(const MaterialTable& table) {
    std::ostringstream out;
    out << "# name  density[kg/m^3]  conductivity[W/(m K)]  cv_linear[J/(kg K^2)]  cv_cubic[J/(kg K^4)]\n";
    out << std::setprecision(10);
    for (const auto& [name, m] : table)
        out << name << ' ' << m.density << ' ' << m.thermal_conductivity << ' ' << m.cv_linear << ' '
            << m.cv_cubic << '\n';
    return out.str();
}

}  // namespace soen::htron
