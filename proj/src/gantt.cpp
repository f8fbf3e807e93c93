#include "fogweaver/gantt.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace fogweaver {

namespace {

constexpr double kWidth = 1000;
constexpr double kLeft = 110;
constexpr double kLane = 34;
constexpr int kAsciiCols = 80;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    std::ostringstream o;
    o.precision(10);
    o << v;
    return o.str();
}

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#b07aa1", "#76b7b2",
                          "#edc948", "#9c755f", "#bab0ac", "#e15759", "#ff9da7"};

struct Box {
    std::string label;
    std::string cls;
    double start = 0;
    double end = 0;
    int color = 0;
};

struct Lane {
    std::string name;
    std::vector<Box> outlines;
    std::vector<Box> boxes;
};

class Svg {
public:
    Svg(double span, std::size_t lanes) : span_(span > 0 ? span : 1), lanes_(lanes) {}

    std::string render(const std::string& title, const std::vector<Lane>& lanes) {
        const double height = 40 + kLane * static_cast<double>(std::max<std::size_t>(lanes_, 1)) + 30;
        o_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kLeft + kWidth + 20) << "\" height=\""
           << num(height) << "\" font-family=\"monospace\" font-size=\"10\">\n";
        o_ << "<style>.slice{stroke:#222;stroke-width:0.5}.cont{stroke-dasharray:2,1}"
              ".partition{fill:none;stroke:#555;stroke-width:1}.miss{fill:none;stroke:red;stroke-width:2}</style>\n";
        o_ << "<text x=\"4\" y=\"14\">" << escape(title) << "</text>\n";
        for (std::size_t i = 0; i < lanes.size(); ++i) lane(lanes[i], 30 + kLane * static_cast<double>(i));
        axis(height - 20);
        o_ << "</svg>\n";
        return o_.str();
    }

private:
    double x(double t) const { return kLeft + kWidth * t / span_; }

    void lane(const Lane& l, double y) {
        o_ << "<text x=\"4\" y=\"" << num(y + 18) << "\">" << escape(l.name) << "</text>\n";
        for (const auto& b : l.outlines) rect(b, y + 2, kLane - 4, "partition", "none");
        for (const auto& b : l.boxes) {
            const bool miss = b.cls == "miss";
            rect(b, y + 6, kLane - 12, b.cls, miss ? "none" : kPalette[b.color % 10]);
        }
    }

    void rect(const Box& b, double y, double h, const std::string& cls, const std::string& fill) {
        o_ << "<rect class=\"" << cls << "\" x=\"" << num(x(b.start)) << "\" y=\"" << num(y) << "\" width=\""
           << num(std::max(0.5, x(b.end) - x(b.start))) << "\" height=\"" << num(h) << "\" fill=\"" << fill
           << "\"><title>" << escape(b.label) << " [" << num(b.start) << "," << num(b.end)
           << ")</title></rect>\n";
    }

    void axis(double y) {
        o_ << "<line class=\"axis\" x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft + kWidth)
           << "\" y2=\"" << num(y) << "\" stroke=\"#000\"/>\n";
        for (int i = 0; i <= 10; ++i) {
            const double t = span_ * i / 10;
            o_ << "<text class=\"tick\" x=\"" << num(x(t)) << "\" y=\"" << num(y + 12) << "\" text-anchor=\"middle\">"
               << num(t) << "</text>\n";
        }
    }

    double span_;
    std::size_t lanes_;
    std::ostringstream o_;
};

std::string ascii(const std::string& title, double span, const std::vector<Lane>& lanes) {
    std::ostringstream o;
    o << title << " span " << num(span) << "us\n";
    std::map<std::string, char> glyph;
    for (const auto& l : lanes)
        for (const auto& b : l.boxes)
            if (b.cls != "miss" && !glyph.count(b.label.substr(0, b.label.find('#')))) {
                const auto n = glyph.size();
                glyph[b.label.substr(0, b.label.find('#'))] = n < 26 ? static_cast<char>('A' + n) : '#';
            }
    for (const auto& l : lanes) {
        std::string bar(kAsciiCols, '.');
        for (const auto& b : l.boxes) {
            if (b.cls == "miss" || span <= 0) continue;
            const char g = glyph[b.label.substr(0, b.label.find('#'))];
            const auto from = static_cast<int>(b.start / span * kAsciiCols);
            const auto to = std::max(from + 1, static_cast<int>(b.end / span * kAsciiCols));
            for (int c = std::max(from, 0); c < std::min(to, kAsciiCols); ++c) bar[static_cast<std::size_t>(c)] = g;
        }
        o << l.name << " |" << bar << "|\n";
        for (const auto& b : l.outlines)
            o << "  partition " << b.label << " [" << num(b.start) << "," << num(b.end) << ")\n";
        for (const auto& b : l.boxes) {
            const char* kind = b.cls == "miss" ? "  MISS " : b.cls.find("cont") != std::string::npos ? "  slice+ " : "  slice ";
            o << kind << b.label << " [" << num(b.start) << "," << num(b.end) << ")\n";
        }
    }
    if (!glyph.empty()) {
        o << "legend";
        for (const auto& [name, g] : glyph) o << " " << g << "=" << name;
        o << "\n";
    }
    return o.str();
}

}  // namespace

std::string gantt_node(const NodeSchedule& ns, GanttFormat fmt, const GanttMarks& marks) {
    const double span = marks.span > 0 ? marks.span : ns.major_frame;
    std::map<std::string, int> color;
    for (const auto& t : ns.tasks) color.emplace(t.id, static_cast<int>(color.size()));

    std::vector<Lane> lanes(static_cast<std::size_t>(std::max(ns.cores, 0)));
    for (int c = 0; c < ns.cores; ++c) lanes[static_cast<std::size_t>(c)].name = ns.node + " core " + std::to_string(c);
    for (const auto& p : ns.partitions) {
        if (p.core < 0 || p.core >= ns.cores) continue;
        for (const auto& w : p.windows) lanes[static_cast<std::size_t>(p.core)].outlines.push_back({p.id, "partition", w.start, w.end, 0});
    }
    auto add_slices = [&](const std::vector<const TaskSlice*>& slices) {
        std::set<std::pair<std::string, int>> seen;
        for (const TaskSlice* sl : slices) {
            if (sl->core < 0 || sl->core >= ns.cores) continue;
            const bool resumed = !seen.insert({sl->task, sl->job_index}).second;
            auto [it, fresh] = color.emplace(sl->task, static_cast<int>(color.size()));
            lanes[static_cast<std::size_t>(sl->core)].boxes.push_back(
                {sl->task + "#" + std::to_string(sl->job_index), resumed ? "slice cont" : "slice", sl->start, sl->end,
                 it->second});
        }
    };
    std::vector<const TaskSlice*> ordered;
    for (const auto& sl : ns.slices) ordered.push_back(&sl);
    for (const auto& sl : marks.dynamic) ordered.push_back(&sl);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const TaskSlice* a, const TaskSlice* b) { return a->start < b->start; });
    add_slices(ordered);
    if (marks.miss_core >= 0 && marks.miss_core < ns.cores)
        for (const auto& m : marks.misses)
            lanes[static_cast<std::size_t>(marks.miss_core)].boxes.push_back({m.task + " miss", "miss", m.release, m.deadline, 0});

    const std::string title = "node " + ns.node;
    if (fmt == GanttFormat::ascii) return ascii(title, span, lanes);
    return Svg(span, lanes.size()).render(title, lanes);
}

std::string gantt_net(const NetSchedule& ns, const Scenario& s, GanttFormat fmt) {
    std::map<std::size_t, Lane> by_link;
    std::map<std::string, int> color;
    for (const auto& st : s.streams) color.emplace(st.id, static_cast<int>(color.size()));
    for (const auto& w : ns.windows) {
        Lane& l = by_link[w.link];
        if (l.name.empty()) l.name = w.link < s.links.size() ? s.links[w.link].name() : std::to_string(w.link);
        auto [it, fresh] = color.emplace(w.stream, static_cast<int>(color.size()));
        l.boxes.push_back({w.stream + "#" + std::to_string(w.instance), "slice", to_micros(w.open), to_micros(w.close), it->second});
    }
    std::vector<Lane> lanes;
    for (auto& [link, l] : by_link) {
        std::stable_sort(l.boxes.begin(), l.boxes.end(), [](const Box& a, const Box& b) { return a.start < b.start; });
        lanes.push_back(std::move(l));
    }
    const double span = to_micros(ns.cycle);
    if (fmt == GanttFormat::ascii) return ascii("network", span, lanes);
    return Svg(span, lanes.size()).render("network", lanes);
}

}  // namespace fogweaver
