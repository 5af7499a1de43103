from .dashboard import CountsDashboard
