#include "parcelfuse/records.hpp"

#include "parcelfuse/strings.hpp"

namespace parcelfuse {

Source Source::parse(std::string_view text) {
    std::string name = ascii_lower(trim(text));
    for (char& c : name)
        if (c == ' ') c = '_';
    if (name == "yp" || name == "yellow_pages") name = "yellowpages";
    SourceKind kind = SourceKind::Other;
    if (name == "google") kind = SourceKind::Google;
    else if (name == "bing") kind = SourceKind::Bing;
    else if (name == "yellowpages") kind = SourceKind::YellowPages;
    else if (name == "osm") kind = SourceKind::Osm;
    return Source{kind, std::move(name)};
}

const std::vector<std::string>& datasf_class_names() {
    static const std::vector<std::string> names = {
        "CIE", "MED", "MIPS", "MIXED", "MIXRES",
        "PDR", "RESIDENT", "RETAIL/ENT", "VACANT", "VISITOR",
    };
    return names;
}

}  // namespace parcelfuse
