#include "svsim/content/archetype.hpp"

#include <map>

#include "svsim/errors.hpp"

namespace svsim::content {

const std::vector<Archetype>& archetype_table() {
    static const std::vector<Archetype> table = {
        {"DANCE", 15.0, 5.0, 0.8, "High hook strength, music-synced execution.",
         0.82, 0.55, "choreography stage lights", "upbeat synced track"},
        {"COMEDY", 45.0, 15.0, 0.9, "Narrative setup required, high completion reward.",
         0.68, 0.70, "skit props reaction", "punchline dialogue"},
        {"EDUCATIONAL", 55.0, 10.0, 0.5, "Information-dense, low re-watchability.",
         0.48, 0.60, "whiteboard diagram closeup", "calm narration"},
        {"GAMING", 30.0, 10.0, 0.6, "High visual chaos, niche audience alignment.",
         0.72, 0.55, "screen capture overlay", "game audio commentary"},
        {"LIFESTYLE", 25.0, 10.0, 0.3, "Aesthetic focus, lower hook strength.",
         0.45, 0.50, "soft light interior", "lofi ambient"},
        {"MUSIC", 20.0, 5.0, 0.7, "Audio-dominant, high share probability.",
         0.68, 0.60, "performance mic stage", "original melody vocals"},
        {"PETS", 12.0, 4.0, 0.8, "Universal appeal, very short duration.",
         0.86, 0.55, "animal closeup candid", "squeak purr bark"},
        {"DIY_CRAFTS", 50.0, 15.0, 0.4, "Process-oriented, satisfying visual patterns.",
         0.53, 0.65, "hands workbench macro", "tool sounds"},
        {"TECH", 40.0, 10.0, 0.5, "News/Reviews, text-heavy.",
         0.48, 0.55, "device unbox bench", "voiceover keyboard"},
        {"BEAUTY", 25.0, 8.0, 0.6, "Transformational content, visual-dominant.",
         0.63, 0.55, "mirror palette transition", "soft pop"},
        {"FITNESS", 35.0, 10.0, 0.5, "Instructional loops.",
         0.53, 0.55, "gym form repetition", "counting beat"},
        {"NEWS", 55.0, 5.0, 0.3, "Speech-heavy, requires high attention.",
         0.40, 0.50, "desk graphic ticker", "urgent speech"},
    };
    return table;
}

const Archetype& archetype_by_name(const std::string& name) {
    for (const Archetype& a : archetype_table()) {
        if (a.name == name) return a;
    }
    throw LookupError("unknown archetype: " + name);
}

std::size_t archetype_index(const std::string& name) {
    const auto& table = archetype_table();
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i].name == name) return i;
    }
    throw LookupError("unknown archetype: " + name);
}

std::size_t archetype_group(const std::string& name) {
    static const std::map<std::string, std::size_t> groups = {
        {"DANCE", 0},      {"COMEDY", 1},  {"EDUCATIONAL", 2}, {"NEWS", 2},
        {"GAMING", 3},     {"LIFESTYLE", 4}, {"BEAUTY", 4},    {"MUSIC", 5},
        {"PETS", 6},       {"DIY_CRAFTS", 7}, {"TECH", 8},     {"FITNESS", 9},
    };
    auto it = groups.find(name);
    if (it == groups.end()) {
        throw LookupError("unknown archetype: " + name);
    }
    return it->second;
}

} // namespace svsim::content
