#include "churnscope/change_model.hpp"

#include "churnscope/text_util.hpp"

namespace churnscope {

ReportWindow ReportWindow::make(int64_t days, int64_t end_time) {
    ReportWindow w;
    w.days = days;
    w.end_time = end_time;
    w.end_day = unix_to_day_number(end_time);
    w.start_day = w.end_day - (days - 1);
    return w;
}

void ChangeModel::increment(const MethodIdentity& id, int64_t day, int64_t by) {
    if (by == 0) return;
    MethodStats& stats = files_[id.file_path][id];
    stats.identity = id;
    stats.total_changes += by;
    stats.daily[day] += by;
    if (stats.daily[day] <= 0) stats.daily.erase(day);
}

void ChangeModel::rekey(const MethodIdentity& from, const MethodIdentity& to) {
    auto file_it = files_.find(from.file_path);
    if (file_it == files_.end()) return;
    auto it = file_it->second.find(from);
    if (it == file_it->second.end()) return;
    MethodStats moved = std::move(it->second);
    file_it->second.erase(it);
    if (file_it->second.empty()) files_.erase(file_it);

    MethodStats& dest = files_[to.file_path][to];
    dest.identity = to;
    dest.total_changes += moved.total_changes;
    for (const auto& [day, count] : moved.daily) dest.daily[day] += count;
}

void ChangeModel::remove(const MethodIdentity& id) {
    auto file_it = files_.find(id.file_path);
    if (file_it == files_.end()) return;
    file_it->second.erase(id);
    if (file_it->second.empty()) files_.erase(file_it);
}

const MethodStats* ChangeModel::find(const MethodIdentity& id) const {
    auto file_it = files_.find(id.file_path);
    if (file_it == files_.end()) return nullptr;
    auto it = file_it->second.find(id);
    return it == file_it->second.end() ? nullptr : &it->second;
}

std::vector<MethodStats> ChangeModel::all_stats() const {
    std::vector<MethodStats> out;
    std::map<std::string, const MethodStats*> by_canonical;
    for (const auto& [_, methods] : files_)
        for (const auto& [id, stats] : methods) by_canonical[id.canonical()] = &stats;
    out.reserve(by_canonical.size());
    for (const auto& [_, stats] : by_canonical) out.push_back(*stats);
    return out;
}

std::vector<MethodStats> ChangeModel::file_stats(const std::string& file_path) const {
    std::vector<MethodStats> out;
    auto file_it = files_.find(file_path);
    if (file_it == files_.end()) return out;
    for (const auto& [_, stats] : file_it->second) out.push_back(stats);
    return out;
}

int64_t ChangeModel::total_sum() const {
    int64_t sum = 0;
    for (const auto& [_, methods] : files_)
        for (const auto& [__, stats] : methods) sum += stats.total_changes;
    return sum;
}

void apply_refactorings(StatsSink& sink, const std::vector<RefactoringEvent>& events,
                        int64_t commit_day, bool count_renames) {
    for (const RefactoringEvent& e : events) {
        switch (e.kind) {
            case RefactoringKind::ExtractMethod:
            case RefactoringKind::ExtractAndMove:
                sink.increment(e.after, commit_day, 1);
                break;
            case RefactoringKind::InlineMethod:
                if (e.before) sink.remove(*e.before);
                if (e.host) sink.increment(*e.host, commit_day, 1);
                break;
            case RefactoringKind::RenameMethod:
            case RefactoringKind::MoveMethod:
            case RefactoringKind::PullUpMethod:
            case RefactoringKind::PushDownMethod:
                if (e.before) sink.rekey(*e.before, e.after);
                if (count_renames) sink.increment(e.after, commit_day, 1);
                break;
        }
    }
}

}  // namespace churnscope
