#include "svsim/decision/surrogates.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "svsim/errors.hpp"

namespace svsim::decision {

namespace {

struct ArchetypeFlavor {
    const char* topic;      // human-readable topic
    const char* tag;        // canonical hashtag stem
    const char* trait_pool[8];
};

// Flavor banks per content archetype. Trait pools feed the 5-adjective
// persona field; tags feed captions and campaign bundles.
const std::map<std::string, ArchetypeFlavor>& flavors() {
    static const std::map<std::string, ArchetypeFlavor> table = {
        {"DANCE",
         {"dance challenges", "dance",
          {"energetic", "rhythmic", "bold", "expressive", "playful", "magnetic", "athletic",
           "trendy"}}},
        {"COMEDY",
         {"sketch comedy", "comedy",
          {"witty", "irreverent", "quick", "observant", "deadpan", "absurd", "charismatic",
           "relatable"}}},
        {"EDUCATIONAL",
         {"explainers", "learn",
          {"curious", "precise", "patient", "articulate", "methodical", "nerdy", "generous",
           "clear"}}},
        {"GAMING",
         {"gameplay highlights", "gaming",
          {"competitive", "sharp", "sarcastic", "immersive", "tactical", "obsessive", "loud",
           "dedicated"}}},
        {"LIFESTYLE",
         {"daily routines", "lifestyle",
          {"aesthetic", "calm", "aspirational", "organized", "warm", "minimalist", "candid",
           "polished"}}},
        {"MUSIC",
         {"original sounds", "music",
          {"melodic", "soulful", "experimental", "catchy", "moody", "collaborative", "raw",
           "lyrical"}}},
        {"PETS",
         {"pet moments", "pets",
          {"wholesome", "spontaneous", "affectionate", "goofy", "gentle", "chaotic", "adoring",
           "cheerful"}}},
        {"DIY_CRAFTS",
         {"hands-on builds", "diy",
          {"resourceful", "meticulous", "inventive", "practical", "thrifty", "patient",
           "satisfying", "crafty"}}},
        {"TECH",
         {"gadget reviews", "tech",
          {"analytical", "skeptical", "thorough", "early-adopting", "opinionated", "geeky",
           "direct", "informed"}}},
        {"BEAUTY",
         {"transformations", "beauty",
          {"glamorous", "detailed", "confident", "trend-aware", "meticulous", "vibrant",
           "honest", "stylish"}}},
        {"FITNESS",
         {"training loops", "fitness",
          {"disciplined", "motivating", "intense", "consistent", "form-obsessed", "upbeat",
           "no-nonsense", "strong"}}},
        {"NEWS",
         {"rapid briefings", "news",
          {"concise", "skeptical", "urgent", "balanced", "plugged-in", "serious", "crisp",
           "relentless"}}},
    };
    return table;
}

const ArchetypeFlavor& flavor_for(const std::string& archetype) {
    const auto& table = flavors();
    auto it = table.find(archetype);
    if (it != table.end()) return it->second;
    return table.at("LIFESTYLE"); // unknown domains downgrade to a neutral flavor
}

std::string tier_phrase(const std::string& tier) {
    if (tier == "elite") return "a flagship creator posting daily with a production team";
    if (tier == "active") return "a committed creator posting several times a week";
    if (tier == "casual") return "an occasional creator posting when inspiration strikes";
    return "a viewer who never posts and follows trends closely";
}

} // namespace

json surrogate_persona(const std::string& tier, const std::string& domain) {
    const ArchetypeFlavor& f = flavor_for(domain);
    // Trait pick is a pure function of (tier, domain): stable template dictionary.
    RngStream pick = RngStream::from_string("persona|" + tier + "|" + domain);
    std::vector<std::string> traits;
    std::array<int, 8> order{0, 1, 2, 3, 4, 5, 6, 7};
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[pick.next_below(i)]);
    }
    for (int i = 0; i < 5; ++i) traits.emplace_back(f.trait_pool[order[i]]);

    json persona;
    persona["bio"] = "I make " + std::string(f.topic) + " for people who scroll too fast. " +
                     std::string(tier_phrase(tier)) + ".";
    persona["core_traits"] = traits;
    persona["viewing_preferences"] =
        "strong pull toward " + domain + " with side interest in adjacent categories";
    persona["creation_style"] = tier == "elite" ? "high-polish daily uploads timed to peak hours"
                              : tier == "active" ? "steady weekly cadence with trend riffs"
                                                 : "sporadic low-production experiments";
    return persona;
}

json surrogate_caption(const std::string& archetype, const std::vector<std::string>& trending,
                       RngStream& rng) {
    const ArchetypeFlavor& f = flavor_for(archetype);
    static const char* kHooks[] = {"wait for it", "you need this", "POV", "no way this worked",
                                   "day in the life", "watch till the end"};
    static const char* kGeneric[] = {"fyp", "viral", "foryou", "trending"};

    std::string hook = kHooks[rng.next_below(std::size(kHooks))];
    json caption;
    caption["title"] = hook + ": " + std::string(f.topic);
    caption["description"] = "New " + std::string(f.topic) + " drop. " + hook + "!";
    std::vector<std::string> tags;
    tags.push_back(f.tag);
    tags.push_back(kGeneric[rng.next_below(std::size(kGeneric))]);
    for (const std::string& t : trending) {
        std::string canon = canonical_hashtag(t);
        if (!canon.empty() && std::find(tags.begin(), tags.end(), canon) == tags.end()) {
            tags.push_back(canon);
        }
    }
    caption["hashtags"] = tags;
    return caption;
}

const std::vector<std::string>& comment_template_bank() {
    static const std::vector<std::string> bank = {
        "Love this!", "Great vid", "lol", "this is so good", "obsessed", "no way",
        "came back to watch again", "who else is here from the fyp", "underrated",
        "the ending though", "instant follow", "more of this please"};
    return bank;
}

json surrogate_comment(RngStream& rng) {
    const auto& bank = comment_template_bank();
    return json{{"text", bank[rng.next_below(bank.size())]}};
}

CampaignPlan surrogate_campaign(const std::string& creator_domain, int64_t creator_id) {
    const ArchetypeFlavor& f = flavor_for(creator_domain);
    const std::string tag = f.tag;
    const std::string id_tag = tag + "_creator" + std::to_string(creator_id % 100);

    CampaignPlan plan;
    CampaignPlan::Entry day0;
    day0.day_offset = 0;
    day0.category = creator_domain;
    day0.theme = "launch: introduce the series and hook new viewers";
    day0.hashtags = {tag, "new", id_tag};
    day0.short_caption = "Kicking off a new " + std::string(f.topic) + " series";
    day0.cta = "follow";

    CampaignPlan::Entry day1;
    day1.day_offset = 1;
    day1.category = creator_domain;
    day1.theme = "engage: respond to comments and invite duets";
    day1.hashtags = {tag, "reply", id_tag};
    day1.short_caption = "You asked, here is part two";
    day1.cta = "comment";

    CampaignPlan::Entry day2;
    day2.day_offset = 2;
    day2.category = creator_domain;
    day2.theme = "convert: push the live session and gifting";
    day2.hashtags = {tag, "live", id_tag};
    day2.short_caption = "Going live tonight, bring questions";
    day2.live_slot = "evening";
    day2.cta = "join live and send gifts"; // strongest ask of the arc

    plan.entries = {day0, day1, day2};
    return plan;
}

std::vector<TrendForecast> surrogate_trend(const json& series_by_key) {
    std::vector<TrendForecast> out;
    if (!series_by_key.is_object()) return out;
    for (auto it = series_by_key.begin(); it != series_by_key.end(); ++it) {
        const json& arr = it.value();
        if (!arr.is_array() || arr.size() < 2) continue;
        std::vector<double> c;
        for (const json& v : arr) {
            if (!v.is_number()) continue;
            c.push_back(v.get<double>());
        }
        if (c.size() < 2) continue;
        bool rising = c.back() > c[c.size() - 2];
        for (std::size_t i = 1; i + 1 < c.size() && rising; ++i) {
            if (c[i] < c[i - 1]) rising = false; // any dip disqualifies
        }
        if (!rising) continue;
        double rise = c.back() - c.front();
        if (rise <= 0.0) continue;
        double confidence = rise / std::max(c.back(), 1.0);
        confidence = std::clamp(confidence, 0.0, 1.0);
        TrendForecast f;
        f.hashtag = canonical_hashtag(it.key());
        f.confidence = confidence;
        f.rationale = "monotone rise across the window";
        out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(), [](const TrendForecast& a, const TrendForecast& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        return a.hashtag < b.hashtag;
    });
    return out;
}

json surrogate_action(const json& ctx) {
    double energy = ctx.value("energy", 1.0);
    int boredom = ctx.value("boredom", 0);
    int feed_remaining = ctx.value("feed_remaining", 0);
    double exit_threshold = ctx.value("exit_threshold", 0.05);
    int boredom_limit = ctx.value("boredom_limit", 5);
    double creation_probability = ctx.value("creation_probability", 0.0);
    double u_create = ctx.value("u_create", 1.0);

    if (energy < exit_threshold || boredom >= boredom_limit) return json{{"action", "EXIT"}};
    if (u_create < creation_probability) return json{{"action", "CREATE_VIDEO"}};
    if (feed_remaining > 0) return json{{"action", "WATCH_VIDEO"}};
    return json{{"action", "REFRESH"}};
}

json run_surrogate(const DecisionRequest& request, RngStream& rng) {
    const json& p = request.prompt_payload;
    switch (request.task) {
        case Task::PERSONA:
            return surrogate_persona(p.value("tier", "casual"), p.value("domain", "LIFESTYLE"));
        case Task::CAPTION: {
            std::vector<std::string> trending;
            if (p.contains("trending") && p["trending"].is_array()) {
                for (const json& t : p["trending"]) trending.push_back(t.get<std::string>());
            }
            return surrogate_caption(p.value("archetype", "LIFESTYLE"), trending, rng);
        }
        case Task::COMMENT:
            return surrogate_comment(rng);
        case Task::CAMPAIGN:
            return surrogate_campaign(p.value("domain", "LIFESTYLE"),
                                      p.value("creator_id", int64_t{0}))
                .to_json();
        case Task::TREND_PREDICTION: {
            json forecasts = json::array();
            for (const TrendForecast& f : surrogate_trend(p.value("series", json::object()))) {
                forecasts.push_back({{"hashtag", f.hashtag},
                                     {"confidence", f.confidence},
                                     {"rationale", f.rationale}});
            }
            return json{{"forecasts", forecasts}};
        }
        case Task::ACTION_SELECTION:
            return surrogate_action(p);
    }
    throw DomainError("run_surrogate: unhandled task");
}

} // namespace svsim::decision
