#include "proactive/tasks.hpp"

#include "proactive/error.hpp"

namespace proactive {

std::string_view to_string(TaskType t) {
  return t == TaskType::system_building ? "system_building" : "package_usage";
}

namespace {

constexpr const char* kStorefrontStarter = R"py(class Store:
    def __init__(self, name):
        self.name = name
        self.products = {}
        self.orders = {}
        self.next_order_id = 1

    def add_product(self, product):
        self.products[product.product_id] = product

    def remove_product(self, product_id):
        if product_id in self.products:
            del self.products[product_id]

    def place_order(self, items):
        # items: list of (product_id, quantity)
        order = Order(self.next_order_id)
        for product_id, quantity in items:
            product = self.products[product_id]
            if product.stock < quantity:
                raise ValueError(f"not enough stock for {product.name}")
            product.stock -= quantity
            order.add_item(product, quantity)
        self.orders[order.order_id] = order
        self.next_order_id += 1
        return order.order_id

    def total_revenue(self):
        return sum(order.total() for order in self.orders.values())
)py";

constexpr const char* kTodoStarter = R"py(from datetime import datetime


class Task:
    def __init__(self, description, category, priority, date_due=None):
        self.description = description
        self.category = category
        self.priority = priority
        self.date_due = date_due
        self.completed = False

    def mark_completed(self):
        self.completed = True

    def __str__(self):
        status = "x" if self.completed else " "
        due = f" (due {self.date_due:%Y-%m-%d})" if self.date_due else ""
        return f"[{status}] {self.description} [{self.category}, {self.priority}]{due}"


class ToDoList:
    def __init__(self):
        self.tasks = []

    def add_task(self, description, category, priority, date_due=None):
        if priority not in ("High", "Medium", "Low"):
            raise ValueError("priority must be High, Medium or Low")
        self.tasks.append(Task(description, category, priority, date_due))

    def complete_task(self, description):
        for task in self.tasks:
            if task.description == description:
                task.mark_completed()

    def edit_task(self, description, **changes):
        for i in range(len(self.tasks)):
            for task in self.tasks:
                if task.description == description:
                    for key, value in changes.items():
                        setattr(task, key, value)

    def remove_task(self, description):
        for task in self.tasks:
            if task.description == description:
                self.tasks.remove(task)
                return True
        return True

    def list_all(self):
        for task in self.tasks:
            print(task)
)py";

constexpr const char* kSalesStarter = R"py(import numpy as np

# sales[region, month, store, product]
rng = np.random.default_rng(0)
sales = rng.integers(0, 50, size=(3, 12, 10, 100))


def total_sales_per_region(data):
    pass


def cumulative_sales(data):
    pass


def top_products_by_sales(data, k):
    pass


def temporal_correlation(data):
    pass
)py";

constexpr const char* kWeatherStarter = R"py(import numpy as np

rng = np.random.default_rng(1)
temps = rng.normal(18, 12, size=30)


def classify_temps(data):
    categories = np.empty(data.shape, dtype=object)
    categories[data < 0] = "Freezing"
    categories[data > 30] = "Hot"
    return categories


def clip_temps(data):
    pass


def compute_moving_avg(data, window_size):
    pass


def compute_weekly_avg(data):
    pass
)py";

}  // namespace

TaskRegistry TaskRegistry::builtin() {
  std::vector<TaskFixture> tasks;
  tasks.push_back({"storefront", "Storefront", TaskType::system_building,
                   "Design the backend of an online store. Write the Order and Product "
                   "classes so they work with the Store class; add "
                   "apply_discount_to_order(self, order_id, discount) and "
                   "check_order_status(self, order_id); add one feature of your own; "
                   "write tests.",
                   kStorefrontStarter});
  tasks.push_back({"todo_list", "To-do List", TaskType::system_building,
                   "Extend a to-do list backend. Mark overdue tasks with (OVERDUE), reject "
                   "tasks due in the past, find and fix a bug, speed up editing, add "
                   "list_all(show_completed) and list_by_priority(); write tests.",
                   kTodoStarter});
  tasks.push_back({"sales_analysis", "Sales analysis", TaskType::package_usage,
                   "Using only numpy on a (3, 12, 10, 100) sales array: "
                   "total_sales_per_region, cumulative_sales, top_products_by_sales, "
                   "temporal_correlation; write tests.",
                   kSalesStarter});
  tasks.push_back({"weather_trends", "Weather trends", TaskType::package_usage,
                   "Using only numpy on a month of temperatures: finish classify_temps, "
                   "clip_temps to [-10, 40], compute_moving_avg, compute_weekly_avg; "
                   "write tests.",
                   kWeatherStarter});
  return TaskRegistry(std::move(tasks));
}

const TaskFixture* TaskRegistry::find(std::string_view id) const {
  for (const auto& t : tasks_)
    if (t.id == id) return &t;
  return nullptr;
}

const TaskFixture& TaskRegistry::get(std::string_view id) const {
  if (const auto* t = find(id)) return *t;
  throw Error(ErrorCode::configuration, "unknown task '" + std::string(id) + "'");
}

std::vector<const TaskFixture*> TaskRegistry::of_type(TaskType type) const {
  std::vector<const TaskFixture*> out;
  for (const auto& t : tasks_)
    if (t.type == type) out.push_back(&t);
  return out;
}

}  // namespace proactive
