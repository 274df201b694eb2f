import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'fiberscope.settings')
django.setup()
