# main_test.py only re-exports the classes in tests/ for `python main_test.py`;
# collecting it under pytest would run every test twice.
collect_ignore = ["main_test.py"]
